"""Hamiltonian decomposition of the doubled (directed) version of a graph.

A node-wise Hamiltonian decomposition is a spanning set of disjoint
directed cycles, i.e. a permutation ``p`` with ``p(i) != i`` and ``{i, p(i)}``
an edge for every node. Such a permutation is exactly a perfect matching
between a left and a right copy of the node set, which is what we search
for with Hopcroft-Karp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .sampling import SampledGraph

__all__ = [
    "HDVerdict",
    "has_hamiltonian_decomposition",
    "hd_bruteforce",
    "witness_cycles",
    "is_valid_witness",
    "BRUTEFORCE_MAX_N",
]

BRUTEFORCE_MAX_N = 10


@numba.njit(cache=True, nogil=True)
def _hopcroft_karp(indptr, indices, n):
    """Maximum matching of left copy -> right copy; returns (size, match_left)."""
    match_l = np.full(n, -1, np.int64)
    match_r = np.full(n, -1, np.int64)

    # Greedy start, lowest-degree nodes first so they are not starved.
    deg = indptr[1:] - indptr[:-1]
    order = np.argsort(deg, kind="mergesort")
    size = 0
    for k in range(n):
        u = order[k]
        best = -1
        best_deg = n + 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if match_r[v] == -1 and deg[v] < best_deg:
                best = v
                best_deg = deg[v]
        if best >= 0:
            match_l[u] = best
            match_r[best] = u
            size += 1
    if size == n:
        return size, match_l

    inf = n + 1
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    ptr = np.empty(n, np.int64)
    stack = np.empty(n + 1, np.int64)
    via = np.empty(n + 1, np.int64)
    while True:
        # BFS layering from free left nodes.
        head = 0
        tail = 0
        for u in range(n):
            if match_l[u] == -1:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = inf
        found = inf
        while head < tail:
            u = queue[head]
            head += 1
            if dist[u] >= found:
                continue
            for e in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[e]]
                if w == -1:
                    if found == inf:
                        found = dist[u] + 1
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        if found == inf:
            break

        # Vertex-disjoint shortest augmenting paths by iterative DFS.
        for u in range(n):
            ptr[u] = indptr[u]
        for root in range(n):
            if match_l[root] != -1:
                continue
            depth = 0
            stack[0] = root
            while depth >= 0:
                u = stack[depth]
                if ptr[u] == indptr[u + 1]:
                    dist[u] = inf
                    depth -= 1
                    continue
                v = indices[ptr[u]]
                ptr[u] += 1
                w = match_r[v]
                if w == -1:
                    if dist[u] + 1 != found:
                        continue
                    via[depth] = v
                    for k in range(depth + 1):
                        a = stack[k]
                        b = via[k]
                        match_l[a] = b
                        match_r[b] = a
                    size += 1
                    break
                if dist[w] == dist[u] + 1:
                    via[depth] = v
                    depth += 1
                    stack[depth] = w
        if size == n:
            break
    return size, match_l


@dataclass(frozen=True)
class HDVerdict:
    """Outcome of an HD test; ``witness[i]`` is the successor of node i."""

    has_decomposition: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.has_decomposition

    def cycles(self) -> list[list[int]]:
        if self.witness is None:
            raise ValueError("no witness available")
        return witness_cycles(self.witness)


def _csr(g: SampledGraph) -> tuple[np.ndarray, np.ndarray]:
    return g.csr


def has_hamiltonian_decomposition(g: SampledGraph, witness: bool = False) -> HDVerdict:
    """Decide whether the directed version of ``g`` splits into disjoint cycles.

    Args:
        g: the sampled graph.
        witness: also return the successor permutation when one exists.
    """
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    indptr, indices = _csr(g)
    if np.any(indptr[1:] == indptr[:-1]):
        return HDVerdict(False)
    size, match_l = _hopcroft_karp(indptr, indices, g.n)
    if size != g.n:
        return HDVerdict(False)
    return HDVerdict(True, tuple(int(v) for v in match_l) if witness else None)


def hd_bruteforce(g: SampledGraph) -> bool:
    """Exhaustive search over fixed-point-free permutations (test oracle).

    Backtracks node by node, assigning each node an unused neighbor as its
    successor. Only for ``n <= 10``.
    """
    n = g.n
    if n > BRUTEFORCE_MAX_N:
        raise ValueError(f"brute force is limited to n <= {BRUTEFORCE_MAX_N}, got {n}")
    nbrs = [[j for j in range(n) if j != i and g.has_edge(i, j)] for i in range(n)]
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in nbrs[i]:
            if not used[j]:
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return extend(0)


def witness_cycles(perm) -> list[list[int]]:
    """Split a permutation into its cycles, each starting at its smallest node."""
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = perm[i]
        out.append(cyc)
    return out


def is_valid_witness(g: SampledGraph, perm) -> bool:
    """Fixed-point-free permutation using only arcs of the directed version."""
    n = g.n
    if len(perm) != n or sorted(perm) != list(range(n)):
        return False
    return all(perm[i] != i and g.has_edge(i, perm[i]) for i in range(n))
