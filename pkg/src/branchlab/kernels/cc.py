"""Afforest connected components (link / compress with sampling)."""
from __future__ import annotations

from collections import Counter

import numpy as np

from ..graph import Graph
from ..sites import SITES, kernel_sites
from ..trace import TraceSink

NUM_SAMPLES = 1024
SAMPLE_SEED = 0

_c = TraceSink.code
T45, N45 = _c(SITES["cc_45"], 1), _c(SITES["cc_45"], 0)
T50, N50 = _c(SITES["cc_50"], 1), _c(SITES["cc_50"], 0)
T63, N63 = _c(SITES["cc_63"], 1), _c(SITES["cc_63"], 0)
T137, N137 = _c(SITES["cc_137"], 1), _c(SITES["cc_137"], 0)
T141, N141 = _c(SITES["cc_141"], 1), _c(SITES["cc_141"], 0)


def _link(u, v, comp, put):
    p1 = comp[u]
    p2 = comp[v]
    while p1 != p2:
        put(T45)
        high = p1 if p1 > p2 else p2
        low = p1 + (p2 - high)
        p_high = comp[high]
        # single-threaded: the compare_and_swap on comp[high] always succeeds
        if p_high == low or p_high == high:
            put(T50)
            comp[high] = low
            return
        put(N50)
        p1 = comp[comp[high]]
        p2 = comp[low]
    put(N45)


def _compress(comp, put):
    for n in range(len(comp)):
        while comp[n] != comp[comp[n]]:
            put(T63)
            comp[n] = comp[comp[n]]
        put(N63)


def sample_frequent_element(comp: list[int], num_samples: int = NUM_SAMPLES) -> int:
    """Most common label among ``min(num_samples, n)`` seeded random picks."""
    n = len(comp)
    rng = np.random.default_rng(SAMPLE_SEED)
    picks = rng.integers(0, n, size=min(num_samples, n))
    counts = Counter(comp[i] for i in picks.tolist())
    best = max(counts.values())
    return min(label for label, c in counts.items() if c == best)


def run_cc(g: Graph, neighbor_rounds: int = 2, sink: TraceSink | None = None) -> np.ndarray:
    n = g.num_nodes
    if sink is None:
        sink = TraceSink(kernel_sites("cc"))
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    put = sink.put
    out_lists, in_lists = g.out_lists, g.in_lists
    comp = list(range(n))

    for r in range(neighbor_rounds):
        for u in range(n):
            nu = out_lists[u]
            if r < len(nu):
                _link(u, nu[r], comp, put)
        _compress(comp, put)

    c = sample_frequent_element(comp)
    for u in range(n):
        if comp[u] == c:
            continue
        for v in out_lists[u][neighbor_rounds:]:
            put(T137)
            _link(u, v, comp, put)
        put(N137)
        if g.directed:
            for v in in_lists[u]:
                put(T141)
                _link(u, v, comp, put)
            put(N141)

    _compress(comp, put)
    return np.asarray(comp, dtype=np.int64)
