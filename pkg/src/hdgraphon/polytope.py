"""Incidence matrices, facets of the edge cone, and exact point classification.

Facets are found by scanning every (q-1)-subset of incidence columns,
keeping the subsets that are linearly independent and whose normal line
supports the cone. The scan costs ``C(|F|, q-1)`` exact eliminations, which
is fine for ``|F|`` up to about 20 and ``q`` up to about 10.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import linalg
from .errors import DisconnectedSkeletonError, InvariantViolation, RankDeficientError
from .model import SkeletonGraph, is_connected

__all__ = [
    "IncidenceMatrix",
    "Facet",
    "EdgePolytope",
    "PointKind",
    "PointClassification",
    "incidence_matrix",
    "polytope_rank",
    "enumerate_facets",
    "edge_polytope",
    "classify_point",
    "contains_counts",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class IncidenceMatrix:
    """q x |F| matrix whose columns are probability vectors.

    A loop on node i contributes the column ``e_i``; a plain edge {i, j}
    contributes ``(e_i + e_j) / 2``. Columns follow ``column_labels``.
    """

    q: int
    column_labels: tuple[tuple[int, int], ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def columns(self) -> list[tuple[Fraction, ...]]:
        return [tuple(row[j] for row in self.entries) for j in range(len(self.column_labels))]

    @property
    def skeleton(self) -> SkeletonGraph:
        return SkeletonGraph.from_pairs(self.q, self.column_labels)

    def __len__(self):
        return len(self.column_labels)


def _column(q: int, label: tuple[int, int]) -> list[Fraction]:
    i, j = label
    col = [Fraction(0)] * q
    col[i] += HALF
    col[j] += HALF
    return col


def incidence_matrix(s: SkeletonGraph) -> IncidenceMatrix:
    labels = s.edge_order
    cols = [_column(s.q, lab) for lab in labels]
    entries = tuple(tuple(c[i] for c in cols) for i in range(s.q))
    return IncidenceMatrix(s.q, labels, entries)


def polytope_rank(z: IncidenceMatrix) -> int:
    """Dimension of the affine hull of the columns, i.e. ``rank(Z) - 1``.

    Raises:
        DisconnectedSkeletonError: the underlying skeleton is disconnected.
    """
    if not is_connected(z.skeleton):
        raise DisconnectedSkeletonError("polytope rank is only defined for a connected skeleton")
    if len(z) == 0:
        return -1
    return linalg.rank(z.entries) - 1


@dataclass(frozen=True)
class Facet:
    """A facet-defining hyperplane of the cone generated by the columns.

    ``normal_exact`` is the primitive integer normal oriented so that every
    column has a nonnegative inner product with it; ``spanning_columns`` are
    the q-1 independent columns that witnessed it.
    """

    normal_exact: tuple[int, ...]
    spanning_columns: tuple[int, ...]
    normal_unit: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self):
        norm = math.sqrt(sum(v * v for v in self.normal_exact))
        object.__setattr__(self, "normal_unit", tuple(v / norm for v in self.normal_exact))

    def dot(self, x: Sequence) -> Fraction:
        return sum((Fraction(a) * b for a, b in zip(self.normal_exact, x)), Fraction(0))


def _dot(v, x) -> Fraction:
    return sum((a * b for a, b in zip(v, x)), Fraction(0))


def enumerate_facets(z: IncidenceMatrix) -> list[Facet]:
    """All facet-defining hyperplanes of the cone spanned by the columns of ``z``.

    Facets come out in the order their first witnessing subset appears in
    ``itertools.combinations`` order over the columns.

    Raises:
        RankDeficientError: ``z`` does not have rank q.
    """
    q = z.q
    cols = z.columns
    if linalg.rank(z.entries) != q:
        raise RankDeficientError(
            f"incidence matrix has rank {linalg.rank(z.entries)} < q = {q}; the skeleton has no odd cycle"
        )
    seen: dict[tuple[int, ...], Facet] = {}
    for subset in combinations(range(len(cols)), q - 1):
        rows = [cols[j] for j in subset]
        if linalg.rank(rows, q) != q - 1:
            continue
        (normal,) = linalg.nullspace(rows, q)
        normal = linalg.primitive_integer(normal)
        products = [_dot(normal, c) for c in cols]
        has_pos = any(p > 0 for p in products)
        has_neg = any(p < 0 for p in products)
        if has_pos and has_neg:
            continue
        if not has_pos and not has_neg:
            raise InvariantViolation(f"all columns lie on the hyperplane of subset {subset}")
        if has_neg:
            normal = tuple(-v for v in normal)
        if normal not in seen:
            seen[normal] = Facet(normal, subset)

    facets = list(seen.values())
    _check_facets(z, facets)
    return facets


def _check_facets(z: IncidenceMatrix, facets: list[Facet]) -> None:
    cols = z.columns
    for f in facets:
        products = [f.dot(c) for c in cols]
        if any(p < 0 for p in products):
            raise InvariantViolation(f"facet {f.normal_exact} does not support the cone")
        if sum(1 for p in products if p == 0) < z.q - 1:
            raise InvariantViolation(f"facet {f.normal_exact} is not spanned by q-1 columns")
    if linalg.rank([f.normal_exact for f in facets], z.q) != z.q:
        raise InvariantViolation("facet normals of a full-rank cone must span R^q")


@dataclass(frozen=True)
class EdgePolytope:
    """Convex hull of the incidence columns with its half-space description.

    ``facets`` is empty when the cone is not full rank, since the facet
    description used here needs a full-dimensional cone.
    """

    z: IncidenceMatrix
    facets: tuple[Facet, ...]
    rank: int

    @property
    def full_rank(self) -> bool:
        return self.rank == self.z.q - 1


def edge_polytope(s: SkeletonGraph) -> EdgePolytope:
    z = incidence_matrix(s)
    r = polytope_rank(z)
    facets = tuple(enumerate_facets(z)) if r == s.q - 1 else ()
    return EdgePolytope(z, facets, r)


class PointKind(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class PointClassification:
    kind: PointKind
    active: tuple[int, ...]
    products: tuple[Fraction, ...]


def classify_point(x: Sequence, p: EdgePolytope) -> PointClassification:
    """Place a rational point of the simplex hyperplane relative to the polytope.

    ``active`` holds the indices of facets whose normal is orthogonal to x.

    Raises:
        ValueError: x has the wrong length or does not sum to exactly 1.
        RankDeficientError: the polytope is not full rank.
    """
    x = [Fraction(v) for v in x]
    if len(x) != p.z.q:
        raise ValueError(f"point has length {len(x)}, expected {p.z.q}")
    if sum(x) != 1:
        raise ValueError(f"point must sum to exactly 1, got {sum(x)}")
    if not p.full_rank:
        raise RankDeficientError("point classification needs a full-rank edge polytope")
    products = tuple(f.dot(x) for f in p.facets)
    active = tuple(i for i, v in enumerate(products) if v == 0)
    if any(v < 0 for v in products):
        kind = PointKind.OUTSIDE
    elif active:
        kind = PointKind.BOUNDARY
    else:
        kind = PointKind.INTERIOR
    return PointClassification(kind, active, products)


def contains_counts(p: EdgePolytope, counts: Sequence[int], interior: bool = False) -> bool:
    """Whether ``counts / sum(counts)`` lies in the closed (or open) polytope.

    Uses integer arithmetic only; ``counts`` are per-block node counts.
    """
    if not p.full_rank:
        raise RankDeficientError("membership test needs a full-rank edge polytope")
    for f in p.facets:
        v = sum(int(a) * int(b) for a, b in zip(f.normal_exact, counts))
        if v < 0 or (interior and v == 0):
            return False
    return True
