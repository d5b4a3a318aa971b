"""Monte Carlo harness: empirical HD probability versus n, next to the limit.

Trial ``t`` at size ``n`` draws its graph from ``substream(seed, n, t)``, so
counts do not depend on thread count or scheduling. Trials are processed in
index order in fixed batches; a wall-time cutoff therefore always leaves a
prefix of the trials done.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DisconnectedSkeletonError
from .hd import has_hamiltonian_decomposition
from .limitprob import DEFAULT_GAUSSIAN_SAMPLES, LimitKind, LimitVerdict, classify_limit
from .model import StepGraphon, is_connected, load_graphon, skeleton_graph, to_fraction
from .polytope import contains_counts, edge_polytope
from .sampling import GraphSampler, block_counts, substream

log = logging.getLogger(__name__)

__all__ = [
    "ExperimentConfig",
    "NRow",
    "ExperimentResult",
    "run_experiment",
    "emit_results",
    "parse_results_json",
    "parse_results_csv",
    "reproduce",
    "bundled_graphon",
    "bundled_path",
    "FIGURES",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("n", "hd_count", "trials", "empirical_p", "stderr", "limit_kind", "limit_p")
BATCH = 64


def bundled_path(name: str) -> Path:
    """Path of a bundled graphon document, e.g. ``bundled_path("w1")``."""
    path = resources.files("hdgraphon") / "data" / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled graphon named {name!r}")
    return Path(str(path))


def bundled_graphon(name: str) -> StepGraphon:
    return load_graphon(bundled_path(name))


@dataclass(frozen=True)
class ExperimentConfig:
    graphon_path: str
    n_values: tuple[int, ...]
    trials: int = 10_000
    seed: int = 0
    gaussian_samples: int = DEFAULT_GAUSSIAN_SAMPLES
    scale: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values:
            raise ValueError("n_values must be nonempty")
        if any(n < 1 for n in self.n_values):
            raise ValueError("every n must be positive")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise ValueError("n_values must be strictly ascending")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.gaussian_samples < 1:
            raise ValueError("gaussian_samples must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.scale is not None:
            object.__setattr__(self, "scale", to_fraction(self.scale))

    def graphon(self) -> StepGraphon:
        w = load_graphon(self.graphon_path)
        return w.scaled(self.scale) if self.scale is not None else w


@dataclass(frozen=True)
class NRow:
    n: int
    hd_count: int
    trials: int

    @property
    def empirical_p(self) -> float:
        return self.hd_count / self.trials

    @property
    def stderr(self) -> float:
        p = self.empirical_p
        return math.sqrt(p * (1 - p) / self.trials)


@dataclass
class ExperimentResult:
    """Per-n HD counts plus the limit verdict.

    ``closed_violations`` counts graphs that had a decomposition although
    their empirical concentration vector lies outside the closed edge
    polytope (must be 0); ``interior_misses`` counts decomposable graphs whose
    vector sits on the polytope boundary. Both are ``None`` when the polytope
    is not full rank.
    """

    per_n: list[NRow]
    limit: LimitVerdict
    wall_times: list[float] = field(default_factory=list)
    complete: bool = True
    closed_violations: int | None = None
    interior_misses: int | None = None
    reference: float | None = None

    def to_dict(self) -> dict:
        return {
            "per_n": [
                {
                    "n": r.n,
                    "hd_count": r.hd_count,
                    "trials": r.trials,
                    "empirical_p": r.empirical_p,
                    "stderr": r.stderr,
                }
                for r in self.per_n
            ],
            "limit": self.limit.to_dict(),
            "wall_times": list(self.wall_times),
            "complete": self.complete,
            "closed_violations": self.closed_violations,
            "interior_misses": self.interior_misses,
            "reference": self.reference,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentResult":
        return cls(
            per_n=[NRow(int(r["n"]), int(r["hd_count"]), int(r["trials"])) for r in d["per_n"]],
            limit=LimitVerdict.from_dict(d["limit"]),
            wall_times=[float(t) for t in d.get("wall_times", [])],
            complete=bool(d.get("complete", True)),
            closed_violations=d.get("closed_violations"),
            interior_misses=d.get("interior_misses"),
            reference=d.get("reference"),
        )


class _TrialRunner:
    def __init__(self, w: StepGraphon, seed: int):
        self.sampler = GraphSampler(w)
        self.seed = seed
        s = skeleton_graph(w)
        poly = edge_polytope(s)
        self.poly = poly if poly.full_rank else None

    def __call__(self, n: int, t: int) -> tuple[bool, np.ndarray]:
        g = self.sampler.sample(n, substream(self.seed, n, t))
        return has_hamiltonian_decomposition(g).has_decomposition, block_counts(g)


def run_experiment(
    c: ExperimentConfig,
    threads: int = 1,
    max_seconds: float | None = None,
    graphon: StepGraphon | None = None,
) -> ExperimentResult:
    """Sample ``c.trials`` graphs per n, count decompositions, attach the limit.

    Args:
        c: experiment configuration.
        threads: worker threads for trials; results do not depend on it.
        max_seconds: stop after this much wall time and flag the result incomplete.
        graphon: use this graphon instead of reading ``c.graphon_path``
            (``c.scale`` is still applied).

    Raises:
        DisconnectedSkeletonError: the skeleton graph is disconnected.
    """
    w = graphon.scaled(c.scale) if graphon is not None and c.scale is not None else graphon
    if w is None:
        w = c.graphon()
    if not is_connected(skeleton_graph(w)):
        raise DisconnectedSkeletonError("skeleton graph is disconnected; experiment aborted")
    limit = classify_limit(w, c.gaussian_samples, c.seed, threads)
    runner = _TrialRunner(w, c.seed)
    closed_bad = 0 if runner.poly is not None else None
    boundary = 0 if runner.poly is not None else None

    start = time.monotonic()
    per_n, walls, complete = [], [], True
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for n in c.n_values:
            t0 = time.monotonic()
            hits = done = 0
            while done < c.trials:
                if max_seconds is not None and time.monotonic() - start > max_seconds:
                    complete = False
                    break
                idx = range(done, min(done + BATCH, c.trials))
                if pool is None:
                    out = [runner(n, t) for t in idx]
                else:
                    out = list(pool.map(lambda t: runner(n, t), idx))
                for ok, counts in out:
                    if not ok:
                        continue
                    hits += 1
                    if runner.poly is not None:
                        if not contains_counts(runner.poly, counts):
                            closed_bad += 1
                            log.error("n=%d: HD found with concentration outside the polytope: %s", n, counts)
                        elif not contains_counts(runner.poly, counts, interior=True):
                            boundary += 1
                            log.info("n=%d: HD found with concentration on the boundary: %s", n, counts)
                done += len(idx)
            if done:
                per_n.append(NRow(n, hits, done))
                walls.append(time.monotonic() - t0)
            if not complete:
                log.warning("wall-time budget of %ss exhausted at n=%d after %d trials", max_seconds, n, done)
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return ExperimentResult(per_n, limit, walls, complete, closed_bad, boundary)


def _fmt_float(x: float) -> str:
    return repr(float(x))


def emit_results(r: ExperimentResult, format: str = "csv") -> str:
    """Serialize a result as CSV or JSON.

    The CSV has one row per n followed by a row whose ``n`` field is
    ``limit``, carrying the limit kind, probability and (in the ``stderr``
    column) the limit's Monte Carlo standard error.
    """
    if format == "json":
        return json.dumps(r.to_dict(), indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(CSV_COLUMNS)
    kind, lp = r.limit.kind.value, _fmt_float(r.limit.probability)
    for row in r.per_n:
        out.writerow([row.n, row.hd_count, row.trials, _fmt_float(row.empirical_p), _fmt_float(row.stderr), kind, lp])
    out.writerow(["limit", "", "", "", _fmt_float(r.limit.stderr), kind, lp])
    return buf.getvalue()


def parse_results_json(text: str) -> ExperimentResult:
    return ExperimentResult.from_dict(json.loads(text))


def parse_results_csv(text: str) -> tuple[list[NRow], LimitKind, float, float]:
    """Rows, limit kind, limit probability and limit stderr from :func:`emit_results` CSV."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    rows, limit = [], None
    for rec in reader:
        if rec[0] == "limit":
            limit = (LimitKind(rec[5]), float(rec[6]), float(rec[4]))
        else:
            rows.append(NRow(int(rec[0]), int(rec[1]), int(rec[2])))
    if limit is None:
        raise ValueError("CSV has no limit row")
    return rows, *limit


@dataclass(frozen=True)
class StudySpec:
    graphons: dict[str, str]
    n_values: tuple[int, ...]
    trials: int
    reference: float


# The residual studies share one grid, the union of two slightly different grids.
_RESIDUAL_GRID = (50, 100, 200, 300, 400, 500, 700, 1000, 1200, 1500, 2000)

FIGURES = {
    "fig4": StudySpec({"default": "w1"}, (20, 60, 100, 200, 300, 400, 500), 10_000, 0.5),
    "fig6": StudySpec({"0.2": "w2_p02", "0.7": "w2_p07"}, _RESIDUAL_GRID, 10_000, 0.16699),
    "fig7": StudySpec({"0.2": "w3_p02", "0.7": "w3_p07"}, _RESIDUAL_GRID, 10_000, 0.04446),
}


def reproduce(
    figure: str,
    seed: int = 0,
    p: str | None = None,
    trials: int | None = None,
    n_values: Sequence[int] | None = None,
    gaussian_samples: int = DEFAULT_GAUSSIAN_SAMPLES,
    threads: int = 1,
    max_seconds: float | None = None,
) -> ExperimentResult:
    """Rerun one of the bundled reference studies.

    Args:
        figure: ``fig4``, ``fig6`` or ``fig7``.
        p: support value variant for ``fig6``/``fig7`` (``"0.2"`` or ``"0.7"``,
            default ``"0.7"``); ignored for ``fig4``.
        trials, n_values: override the study trial count and n-grid.

    Raises:
        ValueError: unknown figure tag or p variant.
    """
    try:
        study = FIGURES[figure]
    except KeyError:
        raise ValueError(f"unknown figure {figure!r}; choose from {sorted(FIGURES)}") from None
    if "default" in study.graphons:
        name = study.graphons["default"]
    else:
        key = p if p is not None else "0.7"
        if key not in study.graphons:
            raise ValueError(f"{figure} has variants p in {sorted(study.graphons)}, got {key!r}")
        name = study.graphons[key]
    cfg = ExperimentConfig(
        str(bundled_path(name)),
        tuple(n_values) if n_values is not None else study.n_values,
        trials if trials is not None else study.trials,
        seed,
        gaussian_samples,
    )
    res = run_experiment(cfg, threads=threads, max_seconds=max_seconds)
    res.reference = study.reference
    return res

