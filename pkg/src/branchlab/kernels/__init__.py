"""Instrumented GAP kernels.

Every kernel takes an optional :class:`~branchlab.trace.TraceSink` and appends
one event per dynamic evaluation of each instrumented conditional, in program
order. Loop headers emit ``taken`` for every iteration and ``not taken`` on
the final failing test (a ``break`` leaves no failing test).
"""
from __future__ import annotations

from ..graph import Graph
from ..sites import kernel_sites
from ..trace import Trace, TraceSink
from .bc import pick_sources, run_bc
from .bfs import run_bfs
from .cc import run_cc
from .pr import run_pagerank
from .tc import run_tc

__all__ = [
    "run_bfs", "run_pagerank", "run_cc", "run_bc", "run_tc", "pick_sources",
    "run_kernel", "trace_kernel",
]


def run_kernel(kernel: str, g: Graph, sink: TraceSink, *, source: int | None = None,
               seed: int = 1, bc_sources: int = 16, all_sources: bool = False,
               neighbor_rounds: int = 2, damping: float = 0.85, max_iters: int = 20,
               tolerance: float = 1e-4):
    """Dispatch by kernel name with GAPBS default parameters."""
    if kernel == "bfs":
        if source is None:
            source = pick_sources(g, 1, seed)[0]
        return run_bfs(g, source, sink)
    if kernel == "pr":
        return run_pagerank(g, damping, max_iters, tolerance, sink)
    if kernel == "cc":
        return run_cc(g, neighbor_rounds, sink)
    if kernel == "bc":
        sources = range(g.num_nodes) if all_sources else None
        return run_bc(g, bc_sources, seed, sink, sources=sources)
    if kernel == "tc":
        return run_tc(g, sink)
    raise ValueError(f"unknown kernel {kernel!r}")


def trace_kernel(kernel: str, g: Graph, **params) -> tuple[object, Trace]:
    """Run ``kernel`` on a fresh sink; returns (result, trace)."""
    sink = TraceSink(kernel_sites(kernel))
    result = run_kernel(kernel, g, sink, **params)
    return result, sink.to_trace()
