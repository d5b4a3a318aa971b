"""Command-line interface.

Usage::

    hdgraphon analyze --graphon w1
    hdgraphon sample --graphon w1 --n 20 --seed 7 > g.txt
    hdgraphon check-hd g.txt --witness
    hdgraphon limit --graphon w2_p07 --gaussian-samples 200000
    hdgraphon experiment --graphon w1 --n-values 100,300,500 --trials 2000
    hdgraphon reproduce fig6 --p 0.7 --trials 2000

``--graphon`` takes a file path or the name of a bundled graphon. Exit
status is 0 on success, 1 on bad input, 2 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import HDGraphonError, InvariantViolation
from .experiment import (
    FIGURES,
    ExperimentConfig,
    ExperimentResult,
    bundled_path,
    emit_results,
    reproduce,
    run_experiment,
)
from .hd import has_hamiltonian_decomposition
from .limitprob import DEFAULT_GAUSSIAN_SAMPLES, classify_limit
from .model import (
    concentration_vector,
    has_odd_cycle,
    is_connected,
    load_graphon,
    skeleton_graph,
    to_fraction,
)
from .polytope import classify_point, edge_polytope
from .sampling import block_counts, format_edgelist, parse_edgelist, sample_graph, substream

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _graphon_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    try:
        return bundled_path(name)
    except FileNotFoundError:
        raise FileNotFoundError(f"no graphon file or bundled graphon named {name!r}") from None


def _n_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_analyze(args) -> int:
    w = load_graphon(_graphon_path(args.graphon))
    s = skeleton_graph(w)
    x = concentration_vector(w)
    poly = edge_polytope(s)
    odd = has_odd_cycle(s)
    report = {
        "q": w.q,
        "num_edges": len(s.edge_order),
        "columns": [list(lab) for lab in s.edge_order],
        "connected": is_connected(s),
        "has_odd_cycle": odd,
        "rank": poly.rank,
        "x_star": [str(v) for v in x],
        "facets": [],
        "classification": None,
        "active": [],
    }
    if poly.full_rank:
        cls = classify_point(x, poly)
        report["facets"] = [
            {
                "normal_exact": list(f.normal_exact),
                "normal_unit": list(f.normal_unit),
                "spanning_columns": list(f.spanning_columns),
                "value_at_x_star": str(cls.products[k]),
            }
            for k, f in enumerate(poly.facets)
        ]
        report["classification"] = cls.kind.value
        report["active"] = list(cls.active)

    if args.format == "json":
        _out(json.dumps(report, indent=2))
        return EXIT_OK
    lines = [
        f"q            {report['q']}",
        f"|F|          {report['num_edges']}  columns {report['columns']}",
        f"odd cycle    {odd}",
        f"rank         {poly.rank}",
        f"x*           ({', '.join(report['x_star'])})",
    ]
    if poly.full_rank:
        lines.append(f"facets       {len(poly.facets)}")
        for k, f in enumerate(report["facets"]):
            unit = ", ".join(f"{v:+.6f}" for v in f["normal_unit"])
            mark = "*" if k in report["active"] else " "
            lines.append(f"  {mark}H{k + 1}  exact {tuple(f['normal_exact'])}  unit ({unit})  v.x* = {f['value_at_x_star']}")
        lines.append(f"x* is        {report['classification']}")
        lines.append(f"active       {['H%d' % (k + 1) for k in report['active']]}")
    else:
        lines.append("facets       (cone not full rank: no odd cycle)")
    _out("\n".join(lines))
    return EXIT_OK


def cmd_sample(args) -> int:
    w = load_graphon(_graphon_path(args.graphon))
    g = sample_graph(w, args.n, substream(args.seed))
    if args.emit == "edgelist":
        sys.stdout.write(format_edgelist(g))
    elif args.format == "json":
        _out(json.dumps({"n": g.n, "q": g.q, "edges": g.n_edges, "block_counts": block_counts(g).tolist()}))
    else:
        _out(f"n={g.n} q={g.q} edges={g.n_edges} block_counts={block_counts(g).tolist()}")
    return EXIT_OK


def cmd_check_hd(args) -> int:
    text = sys.stdin.read() if args.edgelist == "-" else Path(args.edgelist).read_text(encoding="utf-8")
    g = parse_edgelist(text)
    verdict = has_hamiltonian_decomposition(g, witness=args.witness)
    if args.format == "json":
        doc = {"has_decomposition": verdict.has_decomposition}
        if args.witness and verdict:
            doc["cycles"] = verdict.cycles()
        _out(json.dumps(doc))
        return EXIT_OK
    lines = ["true" if verdict else "false"]
    if args.witness and verdict:
        lines.extend(" ".join(map(str, c)) for c in verdict.cycles())
    _out("\n".join(lines))
    return EXIT_OK


def cmd_limit(args) -> int:
    w = load_graphon(_graphon_path(args.graphon))
    v = classify_limit(w, args.gaussian_samples, args.seed, args.threads)
    if args.format == "text":
        _out(f"{v.kind.value} ({v.reason.value}): P = {v.probability:.6f} +/- {v.stderr:.6f}, {v.active_count} active facets")
    else:
        _out(json.dumps(v.to_dict(), indent=2))
    return EXIT_OK


def _emit_experiment(res: ExperimentResult, fmt: str) -> None:
    if fmt == "text":
        lines = [f"{'n':>6} {'hd':>7} {'trials':>7} {'p_hat':>8} {'stderr':>8}"]
        for r in res.per_n:
            lines.append(f"{r.n:>6} {r.hd_count:>7} {r.trials:>7} {r.empirical_p:>8.4f} {r.stderr:>8.4f}")
        lines.append(f"limit: {res.limit.kind.value} {res.limit.probability:.5f} (+/- {res.limit.stderr:.5f})")
        if res.reference is not None:
            lines.append(f"reference limit: {res.reference}")
        if not res.complete:
            lines.append("INCOMPLETE: wall-time budget exhausted")
        _out("\n".join(lines))
    else:
        sys.stdout.write(emit_results(res, fmt))
    if res.closed_violations:
        raise InvariantViolation(f"{res.closed_violations} decomposable graphs lie outside the closed polytope")


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig(
        str(_graphon_path(args.graphon)),
        tuple(args.n_values),
        args.trials,
        args.seed,
        args.gaussian_samples,
        to_fraction(args.scale) if args.scale is not None else None,
    )
    res = run_experiment(cfg, threads=args.threads, max_seconds=args.max_seconds)
    _emit_experiment(res, args.format or "csv")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    res = reproduce(
        args.figure,
        seed=args.seed,
        p=args.p,
        trials=args.trials,
        n_values=args.n_values,
        gaussian_samples=args.gaussian_samples,
        threads=args.threads,
        max_seconds=args.max_seconds,
    )
    _emit_experiment(res, args.format or "csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def add_globals(p, default):
        p.add_argument("--seed", type=_u64, default=default(0), help="master random seed (u64)")
        p.add_argument("--threads", type=int, default=default(1), help="worker threads")
        p.add_argument("--format", choices=("csv", "json", "text"), default=default(None))
        p.add_argument("-v", "--verbose", action="count", default=default(0))

    parser = argparse.ArgumentParser(prog="hdgraphon", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    add_globals(parser, lambda v: v)
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, lambda v: argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="skeleton, facets and x* classification")
    p.add_argument("--graphon", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sample", parents=[common], help="sample one graph")
    p.add_argument("--graphon", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=("edgelist", "none"), default="edgelist")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check-hd", parents=[common], help="test an edge list for a Hamiltonian decomposition")
    p.add_argument("edgelist", nargs="?", default="-", help="edge-list file, '-' for stdin")
    p.add_argument("--witness", action="store_true", help="print the cycles, one per line")
    p.set_defaults(func=cmd_check_hd)

    p = sub.add_parser("limit", parents=[common], help="limit probability of a decomposition")
    p.add_argument("--graphon", required=True)
    p.add_argument("--gaussian-samples", type=int, default=DEFAULT_GAUSSIAN_SAMPLES)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("experiment", parents=[common], help="empirical P(HD) over an n-grid")
    p.add_argument("--graphon", required=True)
    p.add_argument("--n-values", type=_n_list, required=True, help="comma-separated, ascending")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--gaussian-samples", type=int, default=DEFAULT_GAUSSIAN_SAMPLES)
    p.add_argument("--scale", default=None, help="rational multiplier applied to all values")
    p.add_argument("--max-seconds", type=float, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("reproduce", parents=[common], help="rerun a bundled reference study")
    p.add_argument("figure", choices=sorted(FIGURES))
    p.add_argument("--p", default=None, help="support value variant for fig6/fig7 (0.2 or 0.7)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--n-values", type=_n_list, default=None)
    p.add_argument("--gaussian-samples", type=int, default=DEFAULT_GAUSSIAN_SAMPLES)
    p.add_argument("--max-seconds", type=float, default=None)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (HDGraphonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
