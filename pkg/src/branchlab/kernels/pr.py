"""Pull-based PageRank.

The arithmetic is vectorized; the trace is the exact per-iteration event
pattern the scalar loop nest would produce, which is identical in every
iteration and so is built once and replayed.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from ..graph import Graph
from ..sites import SITES, kernel_sites
from ..trace import TraceSink

_c = TraceSink.code
T46, N46 = _c(SITES["pr_46"], 1), _c(SITES["pr_46"], 0)
T48, N48 = _c(SITES["pr_48"], 1), _c(SITES["pr_48"], 0)


def iteration_events(g: Graph) -> np.ndarray:
    """Codes for one sweep: per vertex ``46T, 48T * indeg, 48N``; then ``46N``."""
    n = g.num_nodes
    indeg = g.in_degrees()
    codes = np.full(g.num_edges_directed + 2 * n + 1, T48, dtype=np.uint16)
    starts = g.in_offsets[:-1] + 2 * np.arange(n)
    codes[starts] = T46
    codes[starts + indeg + 1] = N48
    codes[-1] = N46
    return codes


def run_pagerank(g: Graph, damping: float = 0.85, max_iters: int = 20,
                 tolerance: float = 1e-4, sink: TraceSink | None = None,
                 on_iteration: Callable[[int, np.ndarray], None] | None = None
                 ) -> np.ndarray:
    n = g.num_nodes
    if n < 1:
        raise ValueError("PageRank needs at least one vertex")
    if sink is None:
        sink = TraceSink(kernel_sites("pr"))
    base = (1.0 - damping) / n
    scores = np.full(n, 1.0 / n)
    outdeg = g.out_degrees()
    inv_deg = np.divide(1.0, outdeg, out=np.zeros(n), where=outdeg > 0)
    rows = np.repeat(np.arange(n), g.in_degrees())
    pattern = iteration_events(g)

    for it in range(max_iters):
        contrib = scores * inv_deg
        incoming = np.bincount(rows, weights=contrib[g.in_targets], minlength=n)
        new = base + damping * incoming
        error = np.abs(new - scores).sum()
        scores = new
        sink.extend(pattern)
        if on_iteration is not None:
            on_iteration(it, scores)
        if error < tolerance:
            break
    return scores
