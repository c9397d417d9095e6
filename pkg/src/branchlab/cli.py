"""
Command-line front end.

Subcommands: ``gen``, ``reorder``, ``run``, ``simulate``, ``critical``.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 data-format error.
"""
from __future__ import annotations

import argparse
import datetime
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import analysis
from .graph import (REORDERERS, GraphFormatError, build_graph, gen_kronecker, gen_uniform,
                    load_edge_list, reorder, write_edge_list)
from .kernels import trace_kernel
from .predictors import PLBP_VARIANTS, ZOO, ConfigError, parse_config
from .sites import KERNELS
from .trace import TraceError, read_trace, write_trace

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FORMAT = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _stamp(path: Path) -> None:
    now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    path.with_name(path.name + ".stamp").write_text(now + "\n", encoding="utf-8")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _load_graph(args):
    el = load_edge_list(args.graph, args.format, directed=args.directed)
    return build_graph(el)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        if args.kind == "uniform":
            if args.n is None or args.m is None:
                raise UsageError("uniform generator needs --n and --m")
            el = gen_uniform(args.n, args.m, args.seed, directed=args.directed)
        else:
            if args.scale is None:
                raise UsageError("kron generator needs --scale")
            el = gen_kronecker(args.scale, args.ef, args.seed, directed=args.directed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = write_edge_list(el, args.out)
    print(f"wrote {lines} edges to {args.out}")
    return EXIT_OK


def cmd_reorder(args) -> int:
    g = _load_graph(args)
    h = reorder(g, args.method)
    lines = write_edge_list(h.edge_array(), args.out)
    print(f"wrote {lines} directed edges ({args.method}) to {args.out}")
    return EXIT_OK


def _describe(kernel: str, result) -> str:
    if kernel == "tc":
        return f"triangles {result}"
    if kernel == "pr":
        return f"pr_score_sum {float(np.sum(result)):.6f}"
    if kernel == "cc":
        return f"components {len(np.unique(result))}"
    if kernel == "bfs":
        return f"reached {int(np.sum(result >= 0))}"
    top = int(np.argmax(result)) if len(result) else -1
    return f"bc_top_vertex {top}"


def cmd_run(args) -> int:
    if args.kernel == "tc" and args.directed:
        raise UsageError("tc needs an undirected graph; drop --directed")
    g = _load_graph(args)
    if args.reorder != "none":
        g = reorder(g, args.reorder)
    result, trace = trace_kernel(
        args.kernel, g, source=args.source, seed=args.seed, bc_sources=args.sources,
        all_sources=args.all_sources, neighbor_rounds=args.neighbor_rounds,
        damping=args.damping, max_iters=args.max_iters, tolerance=args.tolerance)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    nbytes = write_trace(trace, out)
    print(f"{args.kernel}: {g!r}")
    print(_describe(args.kernel, result))
    print(f"events {len(trace)}  bytes {nbytes}  trace {out}")
    counts = np.bincount(trace.site_ids, minlength=max(s.site_id for s in trace.sites) + 1)
    print("site_id  site      pc          events")
    for s in trace.sites:
        print(f"{s.site_id:7d}  {s.name:8s}  {s.synthetic_pc:#010x}  {counts[s.site_id]}")
    return EXIT_OK


def _threads() -> int:
    env = os.environ.get("BRANCHLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError("BRANCHLAB_THREADS must be an integer") from None
    return os.cpu_count() or 1


def cmd_simulate(args) -> int:
    configs = [parse_config(p) for p in args.pred]
    baseline = parse_config(args.baseline) if args.baseline else None
    if args.sweep:
        configs = list(ZOO) + [c for c in configs if c not in ZOO]
    if not configs:
        raise UsageError("give at least one --pred or --sweep")
    trace = read_trace(args.trace)
    jobs = list(dict.fromkeys(configs + ([baseline] if baseline else [])))
    with ThreadPoolExecutor(max_workers=min(_threads(), len(jobs))) as pool:
        reports = dict(zip(jobs, pool.map(lambda c: analysis.simulate(trace, c, args.skip),
                                          jobs)))

    out_dir = Path(args.out_dir)
    stem = Path(args.trace).stem
    written = []
    for cfg in jobs:
        path = out_dir / f"{stem}.{cfg.slug}.csv"
        _write(path, analysis.report_csv(reports[cfg]))
        written.append(path)

    pairs = []
    if baseline:
        pairs += [(baseline, c) for c in configs if c != baseline]
    if args.sweep:
        base = PLBP_VARIANTS[0]
        pairs += [(base, v) for v in PLBP_VARIANTS[1:] if (base, v) not in pairs]
    for b, v in pairs:
        delta = analysis.compare_reports(reports[b], reports[v])
        path = out_dir / f"{stem}.{v.slug}.vs.{b.slug}.delta.csv"
        _write(path, analysis.delta_csv(delta))
        written.append(path)
    if args.sweep:
        path = out_dir / f"{stem}.comparison.csv"
        _write(path, analysis.comparison_csv([reports[c] for c in configs]))
        written.append(path)
    if args.stamp:
        for path in written:
            _stamp(path)

    print(f"{'predictor':40s} {'events':>10s} {'misses':>10s} {'miss_rate':>10s} {'mpkb':>9s}")
    for cfg in jobs:
        r = reports[cfg]
        print(f"{cfg.slug:40s} {r.total_events:10d} {r.total_mispredictions:10d} "
              f"{r.overall_miss_rate:10.6f} {r.mpkb:9.3f}")
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_critical(args) -> int:
    if args.report:
        report = analysis.read_report_csv(Path(args.report).read_text(encoding="utf-8"))
    else:
        if not args.trace:
            raise UsageError("give --trace (with --pred) or --report")
        trace = read_trace(args.trace)
        if len(trace) == 0:
            raise TraceError("trace has no events")
        report = analysis.simulate(trace, parse_config(args.pred))
    if report.total_events == 0:
        raise TraceError("report has no events")
    rows = analysis.critical_branches(report, args.coverage)
    text = analysis.critical_csv(rows)
    if args.out:
        out = Path(args.out)
        _write(out, text)
        if args.stamp:
            _stamp(out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="edge list (.el or SNAP text)")
    p.add_argument("--format", choices=["el", "snap-txt"], default=None,
                   help="default: el for *.el, snap-txt otherwise")
    p.add_argument("--directed", action="store_true",
                   help="keep edges one-way (default: symmetrize)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="branchlab",
                                     description="Graph-kernel branch prediction lab.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic edge list")
    p.add_argument("--kind", choices=["uniform", "kron"], required=True)
    p.add_argument("--n", type=int, help="vertices (uniform)")
    p.add_argument("--m", type=int, help="edges (uniform)")
    p.add_argument("--scale", type=int, help="log2 vertices (kron)")
    p.add_argument("--ef", type=int, default=16, help="edge factor (kron)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reorder", help="relabel a graph and write it as .el")
    _graph_args(p)
    p.add_argument("--method", choices=sorted(REORDERERS), required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reorder)

    p = sub.add_parser("run", help="run one kernel and write its branch trace")
    _graph_args(p)
    p.add_argument("--kernel", choices=KERNELS, required=True)
    p.add_argument("--reorder", choices=["none", *sorted(REORDERERS)], default="none")
    p.add_argument("--source", type=int, default=None, help="BFS source")
    p.add_argument("--seed", type=int, default=1, help="source-picking seed (bfs, bc)")
    p.add_argument("--sources", type=int, default=16, help="BC sources")
    p.add_argument("--all-sources", action="store_true", help="exact BC from every vertex")
    p.add_argument("--neighbor-rounds", type=int, default=2)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--max-iters", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--out", required=True, help="output .gbpt trace")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("simulate", help="replay a trace through predictors")
    p.add_argument("--trace", required=True)
    p.add_argument("--pred", action="append", default=[],
                   help='predictor config, e.g. "kind=plbp index_scheme=curr_pc_hash"')
    p.add_argument("--baseline", default=None, help="config to compare every --pred against")
    p.add_argument("--sweep", action="store_true", help="whole zoo plus PLBP variants")
    p.add_argument("--skip", type=int, default=0, help="uncounted warmup events")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--stamp", action="store_true", help="write .stamp files with a timestamp")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("critical", help="occurrence-ranked critical branch table")
    p.add_argument("--trace")
    p.add_argument("--pred", default="kind=gshare")
    p.add_argument("--report", help="report CSV from `simulate` instead of a trace")
    p.add_argument("--coverage", type=float, default=0.98)
    p.add_argument("--out")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_critical)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"branchlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, TraceError, analysis.ReportFormatError) as exc:
        print(f"branchlab {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"branchlab {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"branchlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
