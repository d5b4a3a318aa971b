"""Limit of the probability that a sampled graph has a Hamiltonian decomposition.

The zero-one cases are decided exactly from the skeleton and the
concentration vector. In the residual case (odd cycle present, concentration
vector on the boundary of the edge polytope) the limit is the mass that the
degenerate Gaussian ``N(x*, Diag(x*) - x* x*^T)`` puts on the open region
cut out by the active facets, estimated here by plain Monte Carlo.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DisconnectedSkeletonError, InvariantViolation
from .model import StepGraphon, concentration_vector, has_odd_cycle, is_connected, skeleton_graph
from .polytope import EdgePolytope, PointKind, classify_point, edge_polytope
from .sampling import substream

__all__ = [
    "LimitGaussian",
    "OmegaRegion",
    "LimitKind",
    "LimitReason",
    "LimitVerdict",
    "limit_gaussian",
    "sample_omega",
    "omega_region",
    "omega_region_probability",
    "classify_limit",
    "DEFAULT_GAUSSIAN_SAMPLES",
]

DEFAULT_GAUSSIAN_SAMPLES = 200_000
FACTOR_TOL = 1e-12
SIMPLEX_TOL = 1e-10
# Draws are generated in fixed-size chunks, chunk c from substream (seed, _OMEGA_KEY, c),
# so the estimate does not depend on the number of worker threads.
CHUNK = 1 << 15
_OMEGA_KEY = 0x6F6D6567


@dataclass(frozen=True, eq=False)
class LimitGaussian:
    """``N(mean, covariance)`` with an explicit factor ``B B^T = covariance``."""

    mean: np.ndarray
    covariance: np.ndarray
    factor: np.ndarray

    @property
    def q(self) -> int:
        return self.mean.size


def limit_gaussian(x_star: Sequence) -> LimitGaussian:
    """Limit Gaussian of the rescaled empirical concentration vector.

    The factor is ``B = Diag(s) - x s^T`` with ``s = sqrt(x)``; expanding
    ``B B^T`` and using ``s^T s = 1`` gives ``Diag(x) - x x^T``. Since
    ``1^T B = s^T - s^T = 0``, every draw stays on the hyperplane
    ``sum(w) = 1``.

    Raises:
        InvariantViolation: the factor does not reproduce the covariance.
    """
    x = np.array([float(v) for v in x_star], dtype=float)
    if np.any(x <= 0):
        raise ValueError("concentration vector entries must be positive")
    s = np.sqrt(x)
    cov = np.diag(x) - np.outer(x, x)
    factor = np.diag(s) - np.outer(x, s)
    err = np.max(np.abs(factor @ factor.T - cov))
    if err > FACTOR_TOL:
        raise InvariantViolation(f"Gaussian factor error {err:.3e} exceeds {FACTOR_TOL}")
    return LimitGaussian(x, cov, factor)


def sample_omega(g: LimitGaussian, stream, size: int | None = None) -> np.ndarray:
    """Draw from the limit Gaussian; shape ``(q,)`` or ``(size, q)``."""
    rng = stream if isinstance(stream, np.random.Generator) else substream(int(stream))
    if size is None:
        return g.mean + g.factor @ rng.standard_normal(g.q)
    z = rng.standard_normal((size, g.q))
    return g.mean + z @ g.factor.T


@dataclass(frozen=True, eq=False)
class OmegaRegion:
    """Open cone ``{w on the simplex hyperplane : v.w > 0 for each active v}``."""

    active_normals: np.ndarray
    active_exact: tuple[tuple[int, ...], ...] = ()

    @property
    def size(self) -> int:
        return len(self.active_normals)


def omega_region(p: EdgePolytope, x_star: Sequence) -> OmegaRegion:
    """Region built from the facets that are exactly active at ``x_star``."""
    cls = classify_point(x_star, p)
    facets = [p.facets[i] for i in cls.active]
    for f in facets:
        if f.dot(x_star) != 0:
            raise InvariantViolation("active facet is not orthogonal to x*")
    normals = np.array([f.normal_unit for f in facets], dtype=float).reshape(len(facets), p.z.q)
    return OmegaRegion(normals, tuple(f.normal_exact for f in facets))


def _count_chunk(g: LimitGaussian, normals: np.ndarray, seed: int, c: int, size: int) -> int:
    w = sample_omega(g, substream(seed, _OMEGA_KEY, c), size)
    drift = np.max(np.abs(w.sum(axis=1) - 1.0))
    if drift > SIMPLEX_TOL:
        raise InvariantViolation(f"Gaussian draw left the simplex hyperplane by {drift:.3e}")
    return int(np.count_nonzero(np.all(w @ normals.T > 0, axis=1)))


def omega_region_probability(
    g: LimitGaussian,
    r: OmegaRegion,
    samples: int = DEFAULT_GAUSSIAN_SAMPLES,
    seed: int = 0,
    threads: int = 1,
    exact_singleton: bool = True,
) -> tuple[float, float]:
    """Monte Carlo estimate of ``P(w in region)`` and its binomial standard error.

    A single active facet gives exactly 0.5: the region is then a half-space
    through the mean of a Gaussian whose support is the whole hyperplane.
    Ties ``v.w == 0`` count as misses; they have probability zero.
    Pass ``exact_singleton=False`` to sample the single-facet case anyway.

    Raises:
        ValueError: the region has no active facet, or ``samples < 1``.
        InvariantViolation: the estimate exceeds 0.5 by more than 3 standard errors.
    """
    if r.size == 0:
        raise ValueError("empty active set: the point is interior, no residual probability")
    if r.size == 1 and exact_singleton:
        return 0.5, 0.0
    if samples < 1:
        raise ValueError("samples must be positive")
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)
    jobs = list(enumerate(sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda job: _count_chunk(g, r.active_normals, seed, *job), jobs))
    else:
        hits = sum(_count_chunk(g, r.active_normals, seed, c, size) for c, size in jobs)
    p = hits / samples
    stderr = math.sqrt(p * (1 - p) / samples)
    if p > 0.5 + 3 * stderr:
        raise InvariantViolation(f"residual estimate {p} exceeds 0.5 + 3*stderr")
    return p, stderr


class LimitKind(enum.Enum):
    ONE = "One"
    ZERO = "Zero"
    RESIDUAL = "Residual"


class LimitReason(enum.Enum):
    NO_ODD_CYCLE = "no-odd-cycle"
    OUTSIDE_POLYTOPE = "outside-polytope"
    INTERIOR = "interior"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class LimitVerdict:
    kind: LimitKind
    probability: float
    stderr: float
    reason: LimitReason
    active_normals: tuple[tuple[float, ...], ...] = ()

    @property
    def active_count(self) -> int:
        return len(self.active_normals)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "probability": self.probability,
            "stderr": self.stderr,
            "active_facets": [list(v) for v in self.active_normals],
            "reason": self.reason.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LimitVerdict":
        return cls(
            LimitKind(d["kind"]),
            float(d["probability"]),
            float(d["stderr"]),
            LimitReason(d["reason"]),
            tuple(tuple(float(x) for x in v) for v in d.get("active_facets", ())),
        )


def classify_limit(
    w: StepGraphon,
    gaussian_samples: int = DEFAULT_GAUSSIAN_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> LimitVerdict:
    """Limit of ``P(G_n ~ w has a Hamiltonian decomposition)`` as n grows.

    Raises:
        DisconnectedSkeletonError: the skeleton graph of ``w`` is disconnected.
    """
    s = skeleton_graph(w)
    if not is_connected(s):
        raise DisconnectedSkeletonError("skeleton graph is disconnected; limit is not classified")
    if not has_odd_cycle(s):
        return LimitVerdict(LimitKind.ZERO, 0.0, 0.0, LimitReason.NO_ODD_CYCLE)

    x_star = concentration_vector(w)
    poly = edge_polytope(s)
    cls = classify_point(x_star, poly)
    if cls.kind is PointKind.INTERIOR:
        return LimitVerdict(LimitKind.ONE, 1.0, 0.0, LimitReason.INTERIOR)
    if cls.kind is PointKind.OUTSIDE:
        return LimitVerdict(LimitKind.ZERO, 0.0, 0.0, LimitReason.OUTSIDE_POLYTOPE)

    region = omega_region(poly, x_star)
    if region.size == 0:
        raise InvariantViolation("boundary point with an empty active set")
    gauss = limit_gaussian(x_star)
    p, se = omega_region_probability(gauss, region, gaussian_samples, seed, threads)
    return LimitVerdict(
        LimitKind.RESIDUAL,
        p,
        se,
        LimitReason.BOUNDARY,
        tuple(tuple(float(x) for x in v) for v in region.active_normals),
    )

