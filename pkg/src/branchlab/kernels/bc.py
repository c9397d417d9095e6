"""Brandes betweenness centrality from sampled sources."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..graph import Graph
from ..sites import SITES, kernel_sites
from ..trace import TraceSink

_c = TraceSink.code
T70, N70 = _c(SITES["bc_70"], 1), _c(SITES["bc_70"], 0)
T71, N71 = _c(SITES["bc_71"], 1), _c(SITES["bc_71"], 0)
T75, N75 = _c(SITES["bc_75"], 1), _c(SITES["bc_75"], 0)
T125, N125 = _c(SITES["bc_125"], 1), _c(SITES["bc_125"], 0)
T126, N126 = _c(SITES["bc_126"], 1), _c(SITES["bc_126"], 0)


def pick_sources(g: Graph, num_sources: int, seed: int) -> list[int]:
    """Seeded uniform picks (with repeats) among vertices with out-edges."""
    if num_sources < 1:
        raise ValueError("num_sources must be >= 1")
    if g.num_nodes == 0:
        raise ValueError("graph has no vertices")
    candidates = np.flatnonzero(g.out_degrees() > 0)
    if len(candidates) == 0:
        candidates = np.arange(g.num_nodes)
    rng = np.random.default_rng(seed)
    return candidates[rng.integers(0, len(candidates), size=num_sources)].tolist()


def _single_source(s, out_lists, offsets, num_edges, scores, put):
    n = len(out_lists)
    depths = [-1] * n
    depths[s] = 0
    path_counts = [0.0] * n
    path_counts[s] = 1.0
    succ = bytearray(num_edges)
    levels = [[s]]
    frontier = [s]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for u in frontier:
            base = offsets[u]
            pc_u = path_counts[u]
            for k, v in enumerate(out_lists[u]):
                put(T70)
                if depths[v] == -1:
                    put(T71)
                    depths[v] = depth
                    nxt.append(v)
                else:
                    put(N71)
                if depths[v] == depth:
                    put(T75)
                    succ[base + k] = 1
                    path_counts[v] += pc_u
                else:
                    put(N75)
            put(N70)
        if nxt:
            levels.append(nxt)
        frontier = nxt

    deltas = [0.0] * n
    for level in reversed(levels):
        for u in level:
            delta_u = 0.0
            base = offsets[u]
            pc_u = path_counts[u]
            for k, v in enumerate(out_lists[u]):
                put(T125)
                if succ[base + k]:
                    put(T126)
                    delta_u += pc_u / path_counts[v] * (1.0 + deltas[v])
                else:
                    put(N126)
            put(N125)
            deltas[u] = delta_u
            if u != s:
                scores[u] += delta_u


def run_bc(g: Graph, num_sources: int = 16, seed: int = 0, sink: TraceSink | None = None,
           sources: Sequence[int] | None = None, normalize: bool = True) -> np.ndarray:
    """Betweenness scores accumulated over the chosen sources.

    ``sources`` overrides the seeded pick (e.g. ``range(n)`` for exact BC).
    With ``normalize`` the scores are divided by their maximum.
    """
    n = g.num_nodes
    if sink is None:
        sink = TraceSink(kernel_sites("bc"))
    if sources is None:
        sources = pick_sources(g, num_sources, seed)
    for s in sources:
        if not 0 <= s < n:
            raise ValueError(f"source {s} out of range")
    scores = [0.0] * n
    offsets = g.out_offsets.tolist()
    for s in sources:
        _single_source(s, g.out_lists, offsets, g.num_edges_directed, scores, sink.put)
    out = np.asarray(scores, dtype=np.float64)
    if normalize and n and out.max() > 0:
        out /= out.max()
    return out
