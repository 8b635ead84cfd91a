"""
Comparability predicates for majorization-type preorders on the simplex.

All predicates work through monotone profiles: sorted partial sums for
majorization, weak majorization and s-dominance, plain partial sums for the
upper-triangular (UT) relations. Inequalities are checked with a symmetric
absolute slack ``tol`` so that points built on the boundary of an antecedent
set still classify as comparable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import partial_sums

EPS_GEOM = 1e-10
MAX_ENUM_DIM = 8


class Tag(str, Enum):
    MAJ = "maj"
    WEAK_MAJ = "wmaj"
    UT_MAJ = "ut"
    WEAK_UT_MAJ = "wut"
    SDOM = "sdom"


@dataclass(frozen=True)
class Relation:
    tag: Tag
    s: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        if self.tag is not Tag.SDOM and self.s != 0.0:
            raise ValueError("only s-dominance takes a parameter s")

    @property
    def kind(self) -> str:
        """Profile kind the relation is defined by."""
        return "unsorted" if self.tag in (Tag.UT_MAJ, Tag.WEAK_UT_MAJ) else "sorted"

    @property
    def weak(self) -> bool:
        return self.tag in (Tag.WEAK_MAJ, Tag.WEAK_UT_MAJ)

    def __str__(self):
        return f"sdom(s={self.s:g})" if self.tag is Tag.SDOM else self.tag.value


MAJ = Relation(Tag.MAJ)
WEAK_MAJ = Relation(Tag.WEAK_MAJ)
UT_MAJ = Relation(Tag.UT_MAJ)
WEAK_UT_MAJ = Relation(Tag.WEAK_UT_MAJ)


def sdominance(s: float) -> Relation:
    return Relation(Tag.SDOM, float(s))


def relation(name: str, s: float = 0.0) -> Relation:
    """Parse a relation name such as ``"maj"``, ``"ut"`` or ``"sdom"``."""
    tag = Tag(name.lower())
    return sdominance(s) if tag is Tag.SDOM else Relation(tag)


class DimensionMismatch(ValueError):
    pass


def _profiles_ok(px: np.ndarray, py: np.ndarray, rel: Relation, tol: float) -> np.ndarray:
    if rel.tag is Tag.SDOM:
        return np.all(px - py <= rel.s + tol, axis=-1)
    if rel.weak:
        return np.all(px <= py + tol, axis=-1)
    head = np.all(px[..., :-1] <= py[..., :-1] + tol, axis=-1)
    return head & (np.abs(px[..., -1] - py[..., -1]) <= tol)


def compare(x, y, rel: Relation, tol: float = 1e-9) -> bool:
    """Return True when ``x`` is below ``y`` in the preorder ``rel``.

    Examples
    --------
    >>> compare([1/3, 1/3, 1/3], [0.2, 0.5, 0.3], MAJ)
    True
    >>> compare([0.7, 0.25, 0.05], [1/12, 5/12, 1/2], UT_MAJ)
    False
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return bool(_profiles_ok(partial_sums(x, rel.kind), partial_sums(y, rel.kind), rel, tol))


def compare_batch(X, Y, rel: Relation, tol: float = 1e-9) -> np.ndarray:
    """Row-wise :func:`compare` over two ``(size, n)`` batches."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")
    return _profiles_ok(partial_sums(X, rel.kind), partial_sums(Y, rel.kind), rel, tol)


@dataclass(frozen=True)
class ExtremePointSet:
    """Generating points of the antecedent set of ``source``; one per row."""

    points: np.ndarray
    relation: Relation
    source: np.ndarray

    def __len__(self):
        return len(self.points)


def _dedup(points: np.ndarray, eps: float) -> np.ndarray:
    # snap to an eps grid so rounding noise cannot reorder near-duplicates,
    # then merge lexicographic neighbours that are still within eps
    keys = np.round(points / eps)
    order = np.lexsort(keys.T[::-1])
    pts = points[order]
    keep = [pts[0]]
    for p in pts[1:]:
        if np.max(np.abs(p - keep[-1])) > eps:
            keep.append(p)
    return np.array(keep)


def ut_coarsenings(y) -> np.ndarray:
    """Images of ``y`` under every map f with f(i) >= i, before dedup.

    Row r holds the vector whose i-th entry is the total mass of ``y`` on the
    preimage of i under the r-th map.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    rows = []
    for f in itertools.product(*(range(i, n) for i in range(n))):
        v = np.zeros(n)
        np.add.at(v, list(f), y)
        rows.append(v)
    return np.array(rows)


def extreme_points(y, rel: Relation, eps: float = EPS_GEOM) -> ExtremePointSet:
    """Enumerate the generating points of the antecedent set of ``y``.

    For majorization these are the permutations of ``y``; for
    UT-majorization they are the mass coarsenings along maps f with
    f(i) >= i. Both lists have n! entries before near-duplicates are merged.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if n > MAX_ENUM_DIM:
        raise ValueError(f"extreme point enumeration is limited to n <= {MAX_ENUM_DIM}")
    if rel.tag is Tag.MAJ:
        pts = np.array([y[list(p)] for p in itertools.permutations(range(n))])
    elif rel.tag is Tag.UT_MAJ:
        pts = ut_coarsenings(y)
    else:
        raise ValueError(f"extreme points are only enumerated for maj and ut, not {rel}")
    return ExtremePointSet(_dedup(pts, eps), rel, y.copy())


_SQRT3_2 = np.sqrt(3.0) / 2.0


def project_simplex2(x) -> np.ndarray:
    """Affine chart of the 2-simplex onto an equilateral triangle in the plane."""
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 1] + 0.5 * x[..., 2], _SQRT3_2 * x[..., 2]], axis=-1)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points: np.ndarray, eps: float = EPS_GEOM) -> np.ndarray:
    """Counter-clockwise hull vertices via Andrew's monotone chain."""
    pts = sorted(map(tuple, np.asarray(points, dtype=float)))
    if len(pts) <= 2:
        return np.array(pts)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= eps * eps:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if not hull:
        hull = [pts[0]]
    return np.array(hull)


def _dist_to_segment(p, a, b):
    ab = b - a
    denom = ab @ ab
    if denom == 0.0:
        return np.hypot(*(p - a))
    t = np.clip((p - a) @ ab / denom, 0.0, 1.0)
    return np.hypot(*(p - (a + t * ab)))


def hull_membership_2d(x, eps: ExtremePointSet, tol: float = EPS_GEOM) -> bool:
    """Point-in-polygon test for ``x`` against the hull of ``eps.points``.

    Works in dimension 3 only, through :func:`project_simplex2`. Points within
    ``tol`` of the boundary count as members; degenerate hulls (a point or a
    segment) are handled by distance.
    """
    x = np.asarray(x, dtype=float)
    if x.size != 3 or eps.points.shape[1] != 3:
        raise ValueError("hull membership is only supported in dimension 3")
    p = project_simplex2(x)
    hull = convex_hull_2d(project_simplex2(eps.points))
    if len(hull) == 1:
        return bool(np.hypot(*(p - hull[0])) <= tol)
    edges = list(zip(hull, np.roll(hull, -1, axis=0)))
    if min(_dist_to_segment(p, a, b) for a, b in edges) <= tol:
        return True
    if len(hull) == 2:
        return False
    return all(_cross(a, b, p) >= 0 for a, b in edges)
