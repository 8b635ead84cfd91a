"""
Closed-form laws for random pairs on the simplex and the recursion behind them.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import InvalidDimension

BOLSHEV_MAX_M = 2000
_LOG_BINOM_FROM = 60
_CLAMP_WARN = 1e-8


class InvalidBand(ValueError):
    pass


def _check_band(a: np.ndarray):
    if a.ndim not in (1, 2):
        raise InvalidBand("band must be a vector or a batch of vectors")
    m = a.shape[-1]
    if m > BOLSHEV_MAX_M:
        raise InvalidBand(f"band length {m} exceeds {BOLSHEV_MAX_M}")
    if not np.all(np.isfinite(a)) or np.any(a < 0) or np.any(a > 1):
        raise InvalidBand("band entries must lie in [0, 1]")
    if m > 1 and np.any(np.diff(a, axis=-1) < 0):
        raise InvalidBand("band must be nondecreasing")


def _binom_row(j: int, with_logs: bool):
    if not with_logs:
        return np.array([math.comb(j, k) for k in range(j + 1)], dtype=float), None
    lg = math.lgamma(j + 1)
    return None, np.array(
        [lg - math.lgamma(k + 1) - math.lgamma(j - k + 1) for k in range(j + 1)])


def bolshev(a) -> float | np.ndarray:
    """Probability that sorted uniforms clear a lower band.

    Computes ``P(U_(m,j) > a_j for all j)`` for the order statistics of ``m``
    independent uniforms on [0, 1] through Bolshev's recursion

        P_m(a_1..a_m) = 1 - sum_k C(m, k) a_k**k P_{m-k}(a_{k+1}..a_m),

    with ``P_0 = 1``. Suffix values are memoized, so the cost is O(m**2).
    A 2-d input is treated as a batch of bands, one per row.

    The sum alternates in sign and loses accuracy for long bands; results
    are clipped to [0, 1] with a warning when the excursion exceeds 1e-8.
    """
    a = np.asarray(a, dtype=float)
    _check_band(a)
    single = a.ndim == 1
    A = a[None, :] if single else a
    batch, m = A.shape
    use_logs = m > _LOG_BINOM_FROM
    # Q[:, j] = P_{m-j}(a_{j+1}, ..., a_m) with 0-based j
    Q = np.empty((batch, m + 1))
    Q[:, m] = 1.0
    excursion = 0.0
    with np.errstate(divide="ignore"):
        logA = np.log(A) if use_logs else None
    for j in range(m - 1, -1, -1):
        length = m - j
        ks = np.arange(1, length + 1)
        vals = A[:, j:j + length]  # a_{j+k} for k = 1..length
        tail = Q[:, j + 1:m + 1]
        if use_logs:
            # each term is a probability; binomial and power alone overflow
            _, lc = _binom_row(length, True)
            with np.errstate(divide="ignore", invalid="ignore"):
                logterm = lc[1:] + ks * logA[:, j:j + length] + np.log(tail)
            terms = np.where((vals > 0) & (tail > 0), np.exp(logterm), 0.0)
        else:
            c, _ = _binom_row(length, False)
            terms = c[1:] * vals ** ks * tail
        q = 1.0 - terms.sum(axis=1)
        excursion = max(excursion, float(np.maximum(q - 1.0, -q).max()))
        Q[:, j] = np.clip(q, 0.0, 1.0)
    if excursion > _CLAMP_WARN:
        warnings.warn(f"Bolshev recursion left [0, 1] by {excursion:.3g}; clipping",
                      RuntimeWarning, stacklevel=2)
    out = Q[:, 0]
    return float(out[0]) if single else out


def _check_n(n, least=2):
    if int(n) != n or n < least:
        raise InvalidDimension(f"dimension must be an integer >= {least}, got {n!r}")


def exact_cdf_pi_ut(n: int, t):
    """Distribution function of the UT conversion probability for uniform pairs.

    Zero for ``t <= 0``, ``(1 - 1/n) t`` on (0, 1) and one from ``t = 1`` on,
    so the law has an atom of size ``1/n`` at one.
    """
    _check_n(n)
    t = np.asarray(t, dtype=float)
    out = np.where(t <= 0, 0.0, np.where(t >= 1, 1.0, (1.0 - 1.0 / n) * t))
    return float(out) if out.ndim == 0 else out


def exact_p_comparable_ut(n: int) -> float:
    """``P(X below Y in the UT order)`` for i.i.d. exchangeable continuous X, Y."""
    _check_n(n)
    return 1.0 / n


def dirichlet_bound(n: int, alpha: float, t):
    """Upper bound ``(1 - 1/(alpha n)) t`` on the UT conversion CDF under Dir(alpha)."""
    _check_n(n)
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0) | (t >= 1)):
        raise ValueError("t must lie in (0, 1)")
    out = (1.0 - 1.0 / (alpha * n)) * t
    return float(out) if out.ndim == 0 else out


def example_cdf_n3_alpha2(t):
    """UT conversion CDF for pairs drawn from Dir(2, 2, 2), valid on (0, 1)."""
    t = np.asarray(t, dtype=float)
    out = (10 / 7) * t**2 - (10 / 7) * t**3 + (10 / 9) * t**4 - (4 / 9) * t**5
    return float(out) if out.ndim == 0 else out


def harmonic(n: int, order: int = 1) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.fsum(1.0 / i**order for i in range(1, n + 1))


@dataclass(frozen=True)
class BernsteinDiag:
    """Concentration parameters of the k-th sorted monotone in dimension n.

    ``A_k`` and ``B_k`` are the variance and scale ratios entering the
    Bernstein tail bound; the ``*_lower`` fields are the two-step lower
    bounds on them and ``alpha_n``, ``beta_n`` the slopes of the final step.
    """

    k: int
    n: int
    sum_a: float
    sum_a2: float
    A_k: float
    B_k: float
    alpha_n: float
    beta_n: float
    A_lower_mid: float
    A_lower: float
    B_lower_mid: float
    B_lower: float

    def chain_holds(self, rtol: float = 1e-12) -> bool:
        """Whether both lower-bound chains hold, with relative slack ``rtol``."""
        def le(u, v):
            return u <= v + rtol * max(1.0, abs(v))
        return (le(self.A_lower_mid, self.A_k) and le(self.A_lower, self.A_lower_mid)
                and le(self.B_lower_mid, self.B_k) and le(self.B_lower, self.B_lower_mid))


def coefficients(k: int, n: int) -> np.ndarray:
    """Weights ``a_{k,i}``: one for ``i <= k`` and ``k/i`` beyond."""
    i = np.arange(1, n + 1, dtype=float)
    return np.where(i <= k, 1.0, k / i)


def bernstein_diag(k: int, n: int) -> BernsteinDiag:
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return bernstein_table(n)[k - 1]


def bernstein_table(n: int) -> list[BernsteinDiag]:
    """:class:`BernsteinDiag` for every ``k = 1..n`` in O(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    inv = 1.0 / np.arange(1, n + 1, dtype=float)
    H1 = np.concatenate([[0.0], np.cumsum(inv)])
    H2 = np.concatenate([[0.0], np.cumsum(inv**2)])
    k = np.arange(1, n + 1, dtype=float)
    sum_a = k * (1.0 + H1[n] - H1[1:])
    sum_a2 = k * (1.0 + k * (H2[n] - H2[1:]))
    A = sum_a**2 / sum_a2
    B = sum_a  # the largest weight is always 1
    logn = math.log(n)
    alpha_n = 1.0 - logn**2 / (2 * n - 1)
    beta_n = 1.0 - logn / n
    inner = np.log(n / k) - 1.0 / (2 * k - 1) + 1.0 / (2 * n + 1) + 1.0
    A_mid = n * k / (2 * n - k) * inner**2
    A_low = 0.5 * logn**2 + alpha_n * (k - 1)
    B_mid = k * inner
    B_low = logn + beta_n * (k - 1)
    return [
        BernsteinDiag(int(k[i]), n, float(sum_a[i]), float(sum_a2[i]), float(A[i]),
                      float(B[i]), alpha_n, beta_n, float(A_mid[i]), float(A_low[i]),
                      float(B_mid[i]), float(B_low[i]))
        for i in range(n)
    ]
