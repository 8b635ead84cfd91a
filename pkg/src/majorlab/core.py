"""
Probability vectors, monotone profiles, sampling laws and random streams.

Points of the simplex are plain float64 numpy arrays validated by
:func:`prob_vector`. Batched samplers return arrays of shape ``(size, n)``
with one point per row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

EPS_SUM = 1e-9
EPS_FEAS = 1e-12

ProbVector = np.ndarray

_MASK64 = (1 << 64) - 1


class InvalidDimension(ValueError):
    pass


class InvalidParameter(ValueError):
    pass


def prob_vector(components, eps_sum: float = EPS_SUM) -> ProbVector:
    """Validate ``components`` as a point of the simplex.

    Entries down to ``-EPS_FEAS`` are clamped to zero; anything more negative,
    or a total further than ``eps_sum`` from one, raises ``ValueError``. The
    result is not renormalized.
    """
    x = np.array(components, dtype=float).ravel()
    if x.size == 0:
        raise InvalidDimension("a probability vector needs at least one component")
    if not np.all(np.isfinite(x)):
        raise ValueError("probability vector has non-finite entries")
    if np.any(x < -EPS_FEAS):
        raise ValueError(f"negative component {x.min()!r}")
    x[x < 0] = 0.0
    total = x.sum()
    if abs(total - 1.0) > eps_sum:
        raise ValueError(f"components sum to {total!r}, not 1")
    return x


@dataclass(frozen=True)
class MonotoneProfile:
    """Partial sums of a vector: ``values[k-1]`` is the k-th monotone.

    ``kind`` is ``"sorted"`` (sum of the k largest entries) or ``"unsorted"``
    (sum of the first k entries).
    """

    values: np.ndarray
    kind: str

    def __len__(self):
        return len(self.values)


def profile(x, kind: str = "sorted") -> MonotoneProfile:
    x = np.asarray(x, dtype=float)
    if kind == "sorted":
        vals = np.cumsum(np.sort(x)[::-1])
    elif kind == "unsorted":
        vals = np.cumsum(x)
    else:
        raise ValueError(f"unknown profile kind {kind!r}")
    return MonotoneProfile(vals, kind)


def partial_sums(X, kind: str = "sorted") -> np.ndarray:
    """Row-wise monotone profiles of a batch ``X`` of shape ``(size, n)``."""
    X = np.asarray(X, dtype=float)
    if kind == "sorted":
        return np.cumsum(-np.sort(-X, axis=-1), axis=-1)
    if kind == "unsorted":
        return np.cumsum(X, axis=-1)
    raise ValueError(f"unknown profile kind {kind!r}")


@dataclass(frozen=True)
class DistributionSpec:
    """Sampling law on the simplex.

    ``law`` is ``"uniform"`` or ``"dirichlet"``. For Dirichlet laws ``alpha``
    is either a single positive float (symmetric law) or a tuple with one
    positive entry per coordinate.
    """

    law: str = "uniform"
    alpha: Union[float, tuple, None] = None

    def __post_init__(self):
        if self.law == "uniform":
            if self.alpha is not None:
                raise InvalidParameter("uniform law takes no alpha")
        elif self.law == "dirichlet":
            if self.alpha is None:
                raise InvalidParameter("dirichlet law needs alpha")
            a = np.atleast_1d(np.asarray(self.alpha, dtype=float))
            if a.size == 0 or not np.all(np.isfinite(a)) or np.any(a <= 0):
                raise InvalidParameter(f"alpha must be positive, got {self.alpha!r}")
            if isinstance(self.alpha, (list, np.ndarray)):
                object.__setattr__(self, "alpha", tuple(float(v) for v in a))
        else:
            raise InvalidParameter(f"unknown law {self.law!r}")

    @classmethod
    def uniform(cls) -> "DistributionSpec":
        return cls("uniform")

    @classmethod
    def dirichlet(cls, alpha) -> "DistributionSpec":
        if np.ndim(alpha) == 0:
            return cls("dirichlet", float(alpha))
        return cls("dirichlet", tuple(float(a) for a in alpha))

    @property
    def is_symmetric(self) -> bool:
        """True for laws invariant under coordinate permutations."""
        if self.law == "uniform" or np.ndim(self.alpha) == 0:
            return True
        return len(set(self.alpha)) == 1

    def alphas(self, n: int) -> np.ndarray:
        """Concentration parameters for dimension ``n`` (all ones if uniform)."""
        if self.law == "uniform":
            return np.ones(n)
        if np.ndim(self.alpha) == 0:
            return np.full(n, float(self.alpha))
        if len(self.alpha) != n:
            raise InvalidDimension(
                f"alpha has {len(self.alpha)} entries but dimension is {n}")
        return np.array(self.alpha, dtype=float)

    def describe(self) -> dict:
        d = {"law": self.law}
        if self.alpha is not None:
            d["alpha"] = self.alpha if np.ndim(self.alpha) == 0 else list(self.alpha)
        return d


@dataclass
class RngStream:
    """Counter-based random substream identified by ``(seed, stream_id)``.

    Backed by Philox keyed with both 64-bit words, so the output depends only
    on the pair and never on which other streams exist or in what order they
    are consumed. The stream is stateful; do not share one across threads.
    """

    seed: int
    stream_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        key = ((int(self.seed) & _MASK64) << 64) | (int(self.stream_id) & _MASK64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngStream(0 if rng is None else int(rng)).generator
    raise TypeError(f"cannot use {type(rng).__name__} as a random stream")


def _check_dim(n):
    if int(n) != n or n < 1:
        raise InvalidDimension(f"dimension must be a positive integer, got {n!r}")
    return int(n)


def sample_uniform(n: int, rng, size: int | None = None,
                   method: str = "exponential") -> np.ndarray:
    """Draw uniform points of the simplex in dimension ``n``.

    Parameters
    ----------
    n : int
        Number of components.
    rng : RngStream or numpy Generator
    size : int, optional
        Number of points. If omitted a single vector is returned, otherwise
        an array of shape ``(size, n)``.
    method : {"exponential", "spacings"}
        ``"exponential"`` normalizes i.i.d. rate-one exponentials (no sort);
        ``"spacings"`` takes the gaps between ``n - 1`` sorted uniforms.
        Both give the same law.
    """
    n = _check_dim(n)
    g = as_generator(rng)
    shape = (1 if size is None else int(size), n)
    if method == "exponential":
        Z = g.standard_exponential(shape)
        X = Z / Z.sum(axis=1, keepdims=True)
    elif method == "spacings":
        U = np.sort(g.random((shape[0], n - 1)), axis=1)
        edges = np.concatenate(
            [np.zeros((shape[0], 1)), U, np.ones((shape[0], 1))], axis=1)
        X = np.diff(edges, axis=1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return X[0] if size is None else X


def sample_dirichlet(spec: DistributionSpec, n: int, rng, size: int | None = None,
                     method: str = "gamma") -> np.ndarray:
    """Draw Dirichlet points of the simplex.

    ``method="gamma"`` normalizes independent gamma variates and works for any
    positive alpha. ``method="stick"`` uses the stick-breaking construction:
    with integer parameters summing to ``m``, the point is the vector of
    spacings of the order statistics of ``m - 1`` uniforms taken at the
    cumulative indices ``alpha_1, alpha_1 + alpha_2, ...``.
    """
    n = _check_dim(n)
    if spec.law == "uniform":
        spec = DistributionSpec.dirichlet(1.0)
    alpha = spec.alphas(n)
    g = as_generator(rng)
    rows = 1 if size is None else int(size)
    if method == "gamma":
        G = g.standard_gamma(alpha, (rows, n))
        X = G / G.sum(axis=1, keepdims=True)
    elif method == "stick":
        if not np.all(alpha == np.round(alpha)):
            raise InvalidParameter("stick-breaking needs integer alpha")
        a = alpha.astype(np.int64)
        m = int(a.sum())
        U = np.sort(g.random((rows, m - 1)), axis=1)
        cut = np.cumsum(a)[:-1] - 1
        edges = np.concatenate(
            [np.zeros((rows, 1)), U[:, cut], np.ones((rows, 1))], axis=1)
        X = np.diff(edges, axis=1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return X[0] if size is None else X


def sample(spec: DistributionSpec, n: int, rng, size: int | None = None) -> np.ndarray:
    """Dispatch to the default sampler for ``spec``."""
    if spec.law == "uniform":
        return sample_uniform(n, rng, size)
    return sample_dirichlet(spec, n, rng, size)
