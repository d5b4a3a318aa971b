"""Sampling graphs from a step-graphon.

Random streams are counter-based (Philox) and derived from a master seed
plus an integer key, so trial ``t`` of an experiment always sees the same
stream regardless of how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import EdgeListError
from .model import StepGraphon

__all__ = [
    "substream",
    "SampledGraph",
    "GraphSampler",
    "sample_blocks",
    "sample_graph",
    "empirical_concentration",
    "block_counts",
    "directed_arc_exists",
    "format_edgelist",
    "parse_edgelist",
]


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, *key)``; key entries must be >= 0."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def _as_generator(stream) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    return substream(int(stream))


@lru_cache(maxsize=8)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    dtype = np.int32 if n < 2**15 else np.int64
    iu, ju = np.triu_indices(n, k=1)
    iu, ju = iu.astype(dtype), ju.astype(dtype)
    iu.flags.writeable = False
    ju.flags.writeable = False
    return iu, ju


def _pair_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@dataclass(frozen=True, eq=False)
class SampledGraph:
    """Undirected simple graph on n nodes with a block label per node.

    The adjacency is a packed bitset over the upper triangle in row-major
    ``(i, j), i < j`` order. The directed version (each edge doubled into two
    opposite arcs) is implicit.
    """

    n: int
    q: int
    block_of: np.ndarray
    bits: np.ndarray
    coordinates: np.ndarray | None = field(default=None)

    def __post_init__(self):
        m = self.n * (self.n - 1) // 2
        if self.bits.dtype != np.uint8 or self.bits.size != (m + 7) // 8:
            raise ValueError("bits must be a packed uint8 array covering n(n-1)/2 pairs")
        if self.block_of.shape != (self.n,):
            raise ValueError("block_of must have length n")
        if self.n and (self.block_of.min() < 0 or self.block_of.max() >= self.q):
            raise ValueError("block labels must lie in 0..q-1")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        block_of: Sequence[int] | None = None,
        q: int | None = None,
    ) -> "SampledGraph":
        mask = np.zeros(n * (n - 1) // 2, dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {(i, j)} out of range for n={n}")
            mask[_pair_index(n, i, j)] = True
        blocks = np.zeros(n, dtype=np.int64) if block_of is None else np.asarray(block_of, dtype=np.int64)
        if q is None:
            q = int(blocks.max()) + 1 if n else 1
        return cls(n, q, blocks, np.packbits(mask))

    @cached_property
    def mask(self) -> np.ndarray:
        m = self.n * (self.n - 1) // 2
        return np.unpackbits(self.bits, count=m).astype(bool)

    @cached_property
    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``(i, j)`` with ``i < j``, row-major order."""
        iu, ju = _triu(self.n)
        sel = np.flatnonzero(self.mask)
        return np.stack([iu[sel], ju[sel]], axis=1).astype(np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.mask.sum())

    def edges(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.edge_array]

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        return bool(self.mask[_pair_index(self.n, i, j)])

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric adjacency as ``(indptr, indices)`` with sorted rows."""
        n = self.n
        dense = np.zeros((n, n), dtype=bool)
        iu, ju = _triu(n)
        dense[iu, ju] = self.mask
        dense |= dense.T
        rows, cols = np.nonzero(dense)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return indptr, cols.astype(np.int64)

    def degrees(self) -> np.ndarray:
        indptr, _ = self.csr
        return np.diff(indptr)


class GraphSampler:
    """Pre-digested view of a graphon for repeated sampling.

    Node coordinates are drawn uniformly on [0, 1] and mapped to blocks with
    half-open intervals ``[sigma[b], sigma[b+1])``; a coordinate equal to an
    interior breakpoint falls in the right-hand block.
    """

    def __init__(self, w: StepGraphon):
        self.graphon = w
        self.q = w.q
        self.inner_breaks = np.array([float(s) for s in w.sigma[1:-1]], dtype=float)
        self.values = np.array([[float(v) for v in row] for row in w.values], dtype=float)

    def blocks(self, u: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.inner_breaks, u, side="right").astype(np.int64)

    def sample_blocks(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        u = rng.random(n)
        return self.blocks(u), u

    def sample(self, n: int, stream, coordinates: bool = False) -> SampledGraph:
        if n < 1:
            raise ValueError("n must be at least 1")
        rng = _as_generator(stream)
        block_of, u = self.sample_blocks(n, rng)
        iu, ju = _triu(n)
        probs = self.values[block_of[iu], block_of[ju]]
        mask = rng.random(iu.size) < probs
        return SampledGraph(n, self.q, block_of, np.packbits(mask), u if coordinates else None)


def sample_blocks(w: StepGraphon, n: int, stream) -> np.ndarray:
    """Block label of each of n nodes (the first sampling step alone)."""
    return GraphSampler(w).sample_blocks(n, _as_generator(stream))[0]


def sample_graph(w: StepGraphon, n: int, stream, coordinates: bool = False) -> SampledGraph:
    """Draw ``G_n ~ w``.

    Args:
        w: the step-graphon.
        n: number of nodes, at least 1.
        stream: a ``numpy.random.Generator`` or an integer seed.
        coordinates: keep the uniform node coordinates on the result.
    """
    return GraphSampler(w).sample(n, stream, coordinates=coordinates)


def block_counts(g: SampledGraph) -> np.ndarray:
    return np.bincount(g.block_of, minlength=g.q)


def empirical_concentration(g: SampledGraph) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(c), g.n) for c in block_counts(g))


def directed_arc_exists(g: SampledGraph, i: int, j: int) -> bool:
    """Whether the arc ``i -> j`` is in the directed version of ``g``."""
    if i == j:
        raise ValueError("directed version has no self-arcs; need i != j")
    return g.has_edge(i, j)


def format_edgelist(g: SampledGraph) -> str:
    """Edge-list document: ``n q`` header, ``i j`` lines, then ``blocks ...``.

    Node indices are 0-based; block labels on the last line are 1-based.
    """
    lines = [f"{g.n} {g.q}"]
    lines.extend(f"{i} {j}" for i, j in g.edge_array)
    lines.append("blocks " + " ".join(str(int(b) + 1) for b in g.block_of))
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> SampledGraph:
    """Inverse of :func:`format_edgelist`; the ``blocks`` line is optional."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise EdgeListError("empty edge list")
    try:
        n, q = (int(t) for t in rows[0])
    except ValueError:
        raise EdgeListError(f"bad header {' '.join(rows[0])!r}; expected 'n q'") from None
    if n < 1 or q < 1:
        raise EdgeListError("n and q must be positive")
    edges, blocks = [], None
    for k, row in enumerate(rows[1:], start=2):
        if row[0] == "blocks":
            try:
                blocks = [int(t) - 1 for t in row[1:]]
            except ValueError:
                raise EdgeListError(f"line {k}: non-integer block label") from None
            if len(blocks) != n or any(not 0 <= b < q for b in blocks):
                raise EdgeListError(f"line {k}: need {n} block labels in 1..{q}")
            continue
        if len(row) != 2:
            raise EdgeListError(f"line {k}: expected 'i j'")
        try:
            i, j = int(row[0]), int(row[1])
        except ValueError:
            raise EdgeListError(f"line {k}: non-integer node index") from None
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise EdgeListError(f"line {k}: invalid edge {i} {j}")
        edges.append((i, j))
    return SampledGraph.from_edges(n, edges, blocks, q)
