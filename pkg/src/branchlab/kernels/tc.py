"""Ordered triangle counting with merge intersection."""
from __future__ import annotations

from ..graph import Graph
from ..sites import SITES, kernel_sites
from ..trace import TraceSink

_c = TraceSink.code
T58, N58 = _c(SITES["tc_58"], 1), _c(SITES["tc_58"], 0)
T62, N62 = _c(SITES["tc_62"], 1), _c(SITES["tc_62"], 0)
T64, N64 = _c(SITES["tc_64"], 1), _c(SITES["tc_64"], 0)


def run_tc(g: Graph, sink: TraceSink | None = None) -> int:
    """Count each triangle once as ``w < v < u``.

    Neighbor scans stop at the first id above the pivot (``if (v > u) break``),
    so adjacency lists must be sorted, which :class:`Graph` guarantees.
    """
    if g.directed:
        raise ValueError("triangle counting needs an undirected graph")
    if sink is None:
        sink = TraceSink(kernel_sites("tc"))
    put = sink.put
    adj = g.out_lists
    total = 0
    for u in range(g.num_nodes):
        nu = adj[u]
        for v in nu:
            if v > u:
                put(T58)
                break
            put(N58)
            it = 0
            for w in adj[v]:
                if w > v:
                    put(T62)
                    break
                put(N62)
                while nu[it] < w:
                    put(T64)
                    it += 1
                put(N64)
                if w == nu[it]:
                    total += 1
    return total
