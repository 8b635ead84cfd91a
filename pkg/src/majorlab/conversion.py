"""
Maximal success probability of converting one state into another.

For a target ``x`` and a resource ``y`` the largest p in [0, 1] with
``p x + (1 - p) z`` below ``y`` for some simplex point ``z`` equals the
smallest ratio of monotones of ``y`` over monotones of ``x``. Sorted
monotones give the majorization value, plain partial sums the UT value.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EPS_FEAS, partial_sums
from .orders import MAJ, UT_MAJ, DimensionMismatch, Relation, Tag, compare_batch


@dataclass(frozen=True)
class ConversionResult:
    p_star: float
    argmin_k: int  # 1-based


def _ratios(px: np.ndarray, py: np.ndarray, skip_tiny: bool) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        r = py / px
    if skip_tiny:
        # 0/0 is skipped, c/0 with c > 0 never binds
        r = np.where(px <= EPS_FEAS, np.inf, r)
    return r


def _pi_batch(X, Y, rel: Relation, tol: float):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")
    px = partial_sums(X, rel.kind)
    py = partial_sums(Y, rel.kind)
    r = _ratios(px, py, skip_tiny=rel.tag is Tag.UT_MAJ)
    k = np.argmin(r, axis=1)
    p = np.clip(r[np.arange(len(r)), k], 0.0, 1.0)
    # every index skipped: x and y both vanish on all prefixes, cannot happen on
    # the simplex but keep the value defined
    p = np.where(np.isfinite(p), p, 1.0)
    p = np.where(compare_batch(X, Y, rel, tol), 1.0, p)
    return p, k + 1


def pi_maj_batch(X, Y, tol: float = 1e-9) -> np.ndarray:
    """Vectorized :func:`pi_maj` over rows; returns only the probabilities."""
    return _pi_batch(X, Y, MAJ, tol)[0]


def pi_ut_batch(X, Y, tol: float = 1e-9) -> np.ndarray:
    """Vectorized :func:`pi_ut` over rows; returns only the probabilities."""
    return _pi_batch(X, Y, UT_MAJ, tol)[0]


def _single(x, y, rel, tol):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    p, k = _pi_batch(x, y, rel, tol)
    return ConversionResult(float(p[0]), int(k[0]))


def pi_maj(x, y, tol: float = 1e-9) -> ConversionResult:
    """Largest success probability of a majorization conversion of ``y`` into ``x``.

    The value is ``min_k phi_k(y) / phi_k(x)`` over sorted partial sums,
    clipped to [0, 1]. On the simplex it is at least ``1/n``. Pairs that are
    comparable within ``tol`` report exactly 1.

    >>> pi_maj([0.8, 0.2], [0.4, 0.6])
    ConversionResult(p_star=0.75, argmin_k=1)
    """
    return _single(x, y, MAJ, tol)


def pi_ut(x, y, tol: float = 1e-9) -> ConversionResult:
    """Largest success probability of a UT conversion of ``y`` into ``x``.

    Uses plain partial sums. Prefixes on which ``x`` carries no mass (at most
    ``EPS_FEAS``) never constrain the value, so a 0/0 ratio is skipped and a
    positive/0 ratio counts as infinite.
    """
    return _single(x, y, UT_MAJ, tol)


def verify_witness(x, y, p: float, rel: Relation, rtol: float = 1e-12) -> bool:
    """Check that the scaled vector ``p * x`` is weakly below ``y``.

    Sorted profiles for majorization, plain partial sums for UT. The slack is
    relative to the monotones of ``y`` so the check stays sharp at any scale.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    kind = "unsorted" if rel.tag in (Tag.UT_MAJ, Tag.WEAK_UT_MAJ) else "sorted"
    px = partial_sums(p * np.asarray(x, dtype=float), kind)
    py = partial_sums(np.asarray(y, dtype=float), kind)
    return bool(np.all(px <= py * (1.0 + rtol)))
