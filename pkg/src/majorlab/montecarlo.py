"""
Seeded Monte Carlo estimates for random pairs on the simplex.

Pairs are generated in fixed-size blocks. Block ``b`` of an experiment draws
its X batch and then its Y batch from ``RngStream(seed, b)``; the block size
depends only on the dimension. Sharding blocks over any number of worker
threads therefore never changes a result, and all reductions run in block
order.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence, Union

import numpy as np

from . import exact
from .conversion import pi_maj_batch, pi_ut_batch
from .core import DistributionSpec, RngStream, sample
from .orders import UT_MAJ, Relation, Tag, compare_batch

ATOM_TOL = 1e-9
Z95 = 1.959963984540054


class Functional(str, Enum):
    PI_MAJ = "pimaj"
    PI_UT = "piut"


def block_rows(n: int) -> int:
    """Rows per block; a function of the dimension alone."""
    return int(max(256, min(16384, 2**21 // max(n, 1))))


@dataclass(frozen=True)
class ExperimentConfig:
    target: Union[Relation, Functional]
    dist: DistributionSpec = field(default_factory=DistributionSpec.uniform)
    n: int = 2
    samples: int = 100_000
    seed: int = 0
    grid: tuple | None = None
    tol: float = 1e-9

    def __post_init__(self):
        if isinstance(self.target, str) and not isinstance(self.target, Enum):
            object.__setattr__(self, "target", Functional(self.target))
        if not isinstance(self.target, (Relation, Functional)):
            raise TypeError("target must be a Relation or a Functional")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n!r}")
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError("samples must be a positive integer")
        if self.grid is not None:
            g = tuple(float(t) for t in self.grid)
            if any(t < 0 or t > 1 for t in g) or any(b < a for a, b in zip(g, g[1:])):
                raise ValueError("grid must be sorted and lie in [0, 1]")
            object.__setattr__(self, "grid", g)

    @property
    def n_blocks(self) -> int:
        return -(-self.samples // block_rows(self.n))

    def describe(self) -> dict:
        target = str(self.target) if isinstance(self.target, Relation) else self.target.value
        d = {"target": target, "dist": self.dist.describe(), "n": self.n,
             "samples": self.samples, "seed": self.seed, "tol": self.tol}
        if self.grid is not None:
            d["grid"] = list(self.grid)
        return d


def draw_block(cfg: ExperimentConfig, b: int):
    """The ``(X, Y)`` batches of block ``b``."""
    rows = block_rows(cfg.n)
    size = min(rows, cfg.samples - b * rows)
    rng = RngStream(cfg.seed, b)
    X = sample(cfg.dist, cfg.n, rng, size)
    Y = sample(cfg.dist, cfg.n, rng, size)
    return X, Y


def map_blocks(cfg: ExperimentConfig, fn: Callable, threads: int | None = None) -> list:
    """Apply ``fn(X, Y)`` to every block and return the results in block order."""
    threads = threads or os.cpu_count() or 1

    def work(b):
        return fn(*draw_block(cfg, b))

    blocks = range(cfg.n_blocks)
    if threads == 1:
        return [work(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, blocks))


def _z(estimate, ref, stderr):
    estimate, ref, stderr = np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                                  for v in (estimate, ref, stderr)))
    diff = estimate - ref
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(stderr > 0, diff / stderr,
                     np.where(np.abs(diff) <= 1e-15, 0.0, np.copysign(np.inf, diff)))
    return float(z) if z.ndim == 0 else z


def proportion_stderr(p, n):
    p = np.asarray(p, dtype=float)
    out = np.sqrt(p * (1.0 - p) / n)
    return float(out) if out.ndim == 0 else out


@dataclass
class ExperimentResult:
    """A proportion estimate with its standard error and optional exact value."""

    estimate: float
    stderr: float
    samples: int
    count: int
    seed: int
    exact_ref: float | None = None
    z_score: float | None = None

    @classmethod
    def from_count(cls, count: int, samples: int, seed: int, exact_ref=None):
        p = count / samples
        se = proportion_stderr(p, samples)
        z = None if exact_ref is None else _z(p, exact_ref, se)
        return cls(p, se, samples, int(count), seed, exact_ref, z)

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "samples": self.samples,
                "count": self.count, "seed": self.seed, "exact_ref": self.exact_ref,
                "z_score": self.z_score}


def comparability_reference(cfg: ExperimentConfig) -> float | None:
    """Known value of ``P(X below Y)`` for the configuration, if any."""
    rel = cfg.target
    if not isinstance(rel, Relation) or cfg.n < 2 or not cfg.dist.is_symmetric:
        return None
    if rel.tag is Tag.UT_MAJ:
        return exact.exact_p_comparable_ut(cfg.n)
    if rel.tag in (Tag.MAJ, Tag.WEAK_MAJ) and cfg.n == 2:
        # on the segment x below y iff max(x) <= max(y), i.i.d. continuous maxima
        return 0.5
    return None


def estimate_comparability(cfg: ExperimentConfig, threads: int | None = None) -> ExperimentResult:
    """Fraction of sampled pairs with ``X`` below ``Y`` in ``cfg.target``."""
    if not isinstance(cfg.target, Relation):
        raise ValueError("comparability needs a relation target")
    counts = map_blocks(
        cfg, lambda X, Y: int(compare_batch(X, Y, cfg.target, cfg.tol).sum()), threads)
    return ExperimentResult.from_count(sum(counts), cfg.samples, cfg.seed,
                                       comparability_reference(cfg))


def bridge_persistence_check(n: int, N: int, dist: DistributionSpec | None = None,
                             seed: int = 0, tol: float = 1e-9,
                             threads: int | None = None) -> ExperimentResult:
    """Persistence of the bridge ``S_k = sum_{i<=k} (Y_i - X_i)`` above zero.

    Uses the same pairs as :func:`estimate_comparability` with the UT
    relation and the same seed, so the two counts coincide.
    """
    cfg = ExperimentConfig(UT_MAJ, dist or DistributionSpec.uniform(), n, N, seed, tol=tol)

    def persists(X, Y):
        S = np.cumsum(Y - X, axis=1)
        ok = np.all(S[:, :-1] >= -tol, axis=1) & (np.abs(S[:, -1]) <= tol)
        return int(ok.sum())

    counts = map_blocks(cfg, persists, threads)
    return ExperimentResult.from_count(sum(counts), N, seed, comparability_reference(cfg))


def sample_functional(cfg: ExperimentConfig, threads: int | None = None) -> np.ndarray:
    """Values of the conversion functional on every sampled pair, in order."""
    if cfg.target is Functional.PI_MAJ:
        fn = pi_maj_batch
    elif cfg.target is Functional.PI_UT:
        fn = pi_ut_batch
    else:
        raise ValueError("functional target must be pimaj or piut")
    return np.concatenate(map_blocks(cfg, lambda X, Y: fn(X, Y, cfg.tol), threads))


@dataclass
class EcdfTable:
    """Empirical distribution function of a functional on a grid of t values.

    ``F[i]`` estimates ``P(value <= t[i])``; ``atom`` is the fraction of
    values equal to one (within ``ATOM_TOL``).
    """

    t: np.ndarray
    F: np.ndarray
    stderr: np.ndarray
    samples: int
    atom: float
    atom_stderr: float
    exact_ref: np.ndarray | None = None
    z: np.ndarray | None = None
    atom_ref: float | None = None
    atom_z: float | None = None

    @property
    def half_width_95(self) -> np.ndarray:
        return Z95 * self.stderr

    @property
    def rows(self):
        return list(zip(self.t.tolist(), self.F.tolist(), self.half_width_95.tolist()))

    def to_dict(self) -> dict:
        def arr(v):
            return None if v is None else np.asarray(v).tolist()
        return {"t": arr(self.t), "F": arr(self.F), "stderr": arr(self.stderr),
                "half_width_95": arr(self.half_width_95), "exact_ref": arr(self.exact_ref),
                "z": arr(self.z), "samples": self.samples, "atom": self.atom,
                "atom_stderr": self.atom_stderr, "atom_ref": self.atom_ref,
                "atom_z": self.atom_z}


def ecdf_reference(cfg: ExperimentConfig, t: np.ndarray):
    """Exact CDF values and atom size where they are known, else ``(None, None)``."""
    n, dist = cfg.n, cfg.dist
    if n < 2 or not dist.is_symmetric:
        return None, None
    if cfg.target is Functional.PI_UT:
        atom = exact.exact_p_comparable_ut(n)
        if dist.law == "uniform" or float(np.ravel(dist.alpha)[0]) == 1.0:
            return exact.exact_cdf_pi_ut(n, t), atom
        if n == 3 and float(np.ravel(dist.alpha)[0]) == 2.0:
            ref = np.where(t <= 0, 0.0, np.where(
                t >= 1, 1.0, exact.example_cdf_n3_alpha2(np.clip(t, 0.0, 1.0))))
            return ref, atom
        return None, atom
    if cfg.target is Functional.PI_MAJ and n == 2:
        return None, 0.5
    return None, None


def ecdf_from_values(cfg: ExperimentConfig, values: np.ndarray) -> EcdfTable:
    if cfg.grid is None:
        raise ValueError("an ECDF needs a grid")
    N = len(values)
    t = np.asarray(cfg.grid, dtype=float)
    F = np.searchsorted(np.sort(values), t, side="right") / N
    se = proportion_stderr(F, N)
    atom = float(np.count_nonzero(values >= 1.0 - ATOM_TOL)) / N
    atom_se = proportion_stderr(atom, N)
    ref, atom_ref = ecdf_reference(cfg, t)
    return EcdfTable(
        t, F, np.asarray(se), N, atom, atom_se,
        exact_ref=ref, z=None if ref is None else np.atleast_1d(_z(F, ref, se)),
        atom_ref=atom_ref, atom_z=None if atom_ref is None else _z(atom, atom_ref, atom_se))


def ecdf_pi(cfg: ExperimentConfig, threads: int | None = None) -> EcdfTable:
    """Empirical CDF of the conversion functional ``cfg.target`` on ``cfg.grid``."""
    return ecdf_from_values(cfg, sample_functional(cfg, threads))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    p_hat: float
    stderr: float
    median: float


def convergence_study(eps: float, n_grid: Sequence[int], N: int, seed: int = 0,
                      dist: DistributionSpec | None = None,
                      threads: int | None = None) -> list[ConvergenceRow]:
    """Estimate ``P(Pi(X, Y) < 1 - eps)`` for the majorization functional at each n.

    The median of the sampled values is reported alongside.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    dist = dist or DistributionSpec.uniform()
    rows = []
    for n in n_grid:
        cfg = ExperimentConfig(Functional.PI_MAJ, dist, int(n), N, seed)
        v = sample_functional(cfg, threads)
        p = float(np.count_nonzero(v < 1.0 - eps)) / N
        rows.append(ConvergenceRow(int(n), p, proportion_stderr(p, N), float(np.median(v))))
    return rows
