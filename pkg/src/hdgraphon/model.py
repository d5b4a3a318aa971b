"""Step-graphons, concentration vectors and skeleton graphs.

Every number in this module is an exact :class:`fractions.Fraction`; the
polytope code downstream decides boundary membership by exact equality,
so no float may leak in here.

Nodes and blocks are 0-based throughout the library.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import (
    AsymmetricValuesError,
    BreakpointOrderError,
    MalformedGraphonError,
    ValueRangeError,
)

__all__ = [
    "StepGraphon",
    "SkeletonGraph",
    "to_fraction",
    "parse_step_graphon",
    "load_graphon",
    "dump_graphon",
    "concentration_vector",
    "skeleton_graph",
    "has_odd_cycle",
    "is_connected",
]


def to_fraction(value: Any) -> Fraction:
    """Convert a rational literal to an exact fraction.

    Accepts ``"a/b"`` strings, exact decimal strings such as ``"0.25"``,
    ints and Fractions. Floats are refused because they are not exact.
    """
    if isinstance(value, bool):
        raise MalformedGraphonError(f"not a rational literal: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise MalformedGraphonError(f"not a rational literal: {value!r}") from None
    raise MalformedGraphonError(
        f"expected a rational string or integer, got {type(value).__name__}: {value!r}"
    )


@dataclass(frozen=True)
class StepGraphon:
    """A symmetric step function on the unit square.

    Attributes:
        sigma: the q+1 breakpoints ``0 = sigma[0] < ... < sigma[q] = 1``.
        values: q x q symmetric matrix; ``values[i][j]`` is the edge
            probability between a node of block i and a node of block j.
    """

    sigma: tuple[Fraction, ...]
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        sigma = tuple(Fraction(s) for s in self.sigma)
        values = tuple(tuple(Fraction(v) for v in row) for row in self.values)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "values", values)

        if len(sigma) < 2:
            raise BreakpointOrderError("sigma needs at least two breakpoints")
        if sigma[0] != 0 or sigma[-1] != 1:
            raise BreakpointOrderError(
                f"sigma must start at 0 and end at 1, got {sigma[0]} .. {sigma[-1]}"
            )
        for a, b in zip(sigma, sigma[1:]):
            if not a < b:
                raise BreakpointOrderError(f"sigma not strictly increasing at {a} -> {b}")

        q = len(sigma) - 1
        if len(values) != q or any(len(row) != q for row in values):
            raise MalformedGraphonError(f"values must be a {q}x{q} matrix to match sigma")
        for i in range(q):
            for j in range(q):
                v = values[i][j]
                if v < 0 or v > 1:
                    raise ValueRangeError(f"values[{i}][{j}] = {v} is outside [0, 1]")
        for i in range(q):
            for j in range(i + 1, q):
                if values[i][j] != values[j][i]:
                    raise AsymmetricValuesError(
                        f"values[{i}][{j}] = {values[i][j]} but values[{j}][{i}] = {values[j][i]}"
                    )

    @property
    def q(self) -> int:
        return len(self.sigma) - 1

    def scaled(self, c) -> "StepGraphon":
        """Return the graphon with every value multiplied by ``c``."""
        c = to_fraction(c)
        return StepGraphon(self.sigma, tuple(tuple(v * c for v in row) for row in self.values))

    def to_document(self) -> dict:
        return {
            "sigma": [str(s) for s in self.sigma],
            "values": [[str(v) for v in row] for row in self.values],
        }


def parse_step_graphon(text: str | bytes) -> StepGraphon:
    """Parse a JSON graphon document.

    The document has keys ``sigma`` (list of q+1 rationals), ``values``
    (q x q list of rationals) and an optional ``scale`` rational applied to
    every value. JSON numbers are read from their literal text, so ``0.25``
    and ``"0.25"`` both become ``Fraction(1, 4)``.

    Raises:
        MalformedGraphonError: the text is not a well-formed document.
        BreakpointOrderError: the breakpoints are not increasing from 0 to 1.
        AsymmetricValuesError: the value matrix is not symmetric.
        ValueRangeError: some (scaled) value lies outside [0, 1].
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text, parse_float=str, parse_int=int)
    except json.JSONDecodeError as exc:
        raise MalformedGraphonError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedGraphonError("top level must be a JSON object")
    unknown = set(doc) - {"sigma", "values", "scale", "name", "description"}
    if unknown:
        raise MalformedGraphonError(f"unknown keys: {sorted(unknown)}")
    if "sigma" not in doc or "values" not in doc:
        raise MalformedGraphonError("document needs both 'sigma' and 'values'")

    sigma, values = doc["sigma"], doc["values"]
    if not isinstance(sigma, list):
        raise MalformedGraphonError("'sigma' must be a list")
    if not isinstance(values, list) or not all(isinstance(row, list) for row in values):
        raise MalformedGraphonError("'values' must be a list of lists")

    sigma = [to_fraction(s) for s in sigma]
    values = [[to_fraction(v) for v in row] for row in values]
    if "scale" in doc:
        scale = to_fraction(doc["scale"])
        if scale < 0:
            raise ValueRangeError(f"scale must be nonnegative, got {scale}")
        values = [[v * scale for v in row] for row in values]
    return StepGraphon(tuple(sigma), tuple(tuple(row) for row in values))


def load_graphon(path: str | Path) -> StepGraphon:
    """Read and parse a graphon document from ``path``."""
    return parse_step_graphon(Path(path).read_text(encoding="utf-8"))


def dump_graphon(g: StepGraphon) -> str:
    return json.dumps(g.to_document())


def concentration_vector(g: StepGraphon) -> tuple[Fraction, ...]:
    """Block lengths ``sigma[i+1] - sigma[i]``; positive and summing to 1."""
    return tuple(b - a for a, b in zip(g.sigma, g.sigma[1:]))


@dataclass(frozen=True)
class SkeletonGraph:
    """Support graph of a step-graphon on the q blocks.

    ``edge_order`` lists every member of F as a pair ``(i, j)`` with
    ``i <= j``; a loop on node i is ``(i, i)``. The order is lexicographic in
    ``(i, j)``, which fixes the column order of the incidence matrix.
    """

    q: int
    loops: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i in self.loops:
            if not 0 <= i < self.q:
                raise ValueError(f"loop node {i} out of range")
        for i, j in self.edges:
            if not (0 <= i < j < self.q):
                raise ValueError(f"edge {(i, j)} must satisfy 0 <= i < j < q")

    @classmethod
    def from_pairs(cls, q: int, pairs: Iterable[tuple[int, int]]) -> "SkeletonGraph":
        """Build from pairs where ``(i, i)`` denotes a loop."""
        loops, edges = set(), set()
        for i, j in pairs:
            if i == j:
                loops.add(i)
            else:
                edges.add((min(i, j), max(i, j)))
        return cls(q, frozenset(loops), frozenset(edges))

    @property
    def edge_order(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted([(i, i) for i in self.loops] + list(self.edges)))

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})


def skeleton_graph(g: StepGraphon) -> SkeletonGraph:
    pairs = [(i, j) for i in range(g.q) for j in range(i, g.q) if g.values[i][j] > 0]
    return SkeletonGraph.from_pairs(g.q, pairs)


def _two_coloring(s: SkeletonGraph) -> list[int] | None:
    color = [-1] * s.q
    adj = {i: s.neighbors(i) for i in range(s.q)}
    for root in range(s.q):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def has_odd_cycle(s: SkeletonGraph) -> bool:
    """True iff ``s`` has a loop or its loopless part is not bipartite."""
    return bool(s.loops) or _two_coloring(s) is None


def is_connected(s: SkeletonGraph) -> bool:
    if s.q == 0:
        return False
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in s.neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == s.q


def graphon_from_support(sigma: Sequence, pairs: Iterable[tuple[int, int]], value=1) -> StepGraphon:
    """Graphon equal to ``value`` on the blocks listed in ``pairs`` and 0 elsewhere."""
    sigma = tuple(to_fraction(s) for s in sigma)
    q = len(sigma) - 1
    value = to_fraction(value)
    vals = [[Fraction(0)] * q for _ in range(q)]
    for i, j in pairs:
        vals[i][j] = vals[j][i] = value
    return StepGraphon(sigma, tuple(tuple(r) for r in vals))
