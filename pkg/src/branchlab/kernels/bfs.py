"""Direction-optimizing BFS (top-down / bottom-up switching)."""
from __future__ import annotations

import numpy as np

from ..graph import Graph
from ..sites import SITES, kernel_sites
from ..trace import TraceSink

ALPHA = 15
BETA = 18

_c = TraceSink.code
T52, N52 = _c(SITES["bfs_52"], 1), _c(SITES["bfs_52"], 0)
T53, N53 = _c(SITES["bfs_53"], 1), _c(SITES["bfs_53"], 0)
T54, N54 = _c(SITES["bfs_54"], 1), _c(SITES["bfs_54"], 0)
T76, N76 = _c(SITES["bfs_76"], 1), _c(SITES["bfs_76"], 0)
T78, N78 = _c(SITES["bfs_78"], 1), _c(SITES["bfs_78"], 0)


def _bottom_up_step(n, in_lists, parent, front, put):
    nxt = bytearray(n)
    awake = 0
    for u in range(n):
        if parent[u] < 0:
            put(T52)
            for v in in_lists[u]:
                put(T53)
                if front[v]:
                    put(T54)
                    parent[u] = v
                    awake += 1
                    nxt[u] = 1
                    break
                put(N54)
            else:
                put(N53)
        else:
            put(N52)
    return awake, nxt


def _top_down_step(out_lists, parent, queue, put):
    scout = 0
    nxt = []
    for u in queue:
        for v in out_lists[u]:
            put(T76)
            curr_val = parent[v]
            if curr_val < 0:
                put(T78)
                parent[v] = u
                nxt.append(v)
                scout -= curr_val
            else:
                put(N78)
        put(N76)
    return scout, nxt


def run_bfs(g: Graph, source: int, sink: TraceSink | None = None,
            alpha: int = ALPHA, beta: int = BETA) -> np.ndarray:
    """Parent array of a BFS tree rooted at ``source`` (-1 = unreachable).

    Unvisited vertices hold ``-out_degree`` (or -1) while the search runs so
    the top-down step can accumulate the scout count, as GAPBS does.
    """
    n = g.num_nodes
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range for {n} vertices")
    if sink is None:
        sink = TraceSink(kernel_sites("bfs"))
    put = sink.put
    out_lists, in_lists = g.out_lists, g.in_lists
    deg = g.out_degrees().tolist()

    parent = [-d if d else -1 for d in deg]
    parent[source] = source
    queue = [source]
    edges_to_check = g.num_edges_directed
    scout_count = deg[source]
    while queue:
        if scout_count > edges_to_check // alpha:
            front = bytearray(n)
            for u in queue:
                front[u] = 1
            awake = len(queue)
            while True:
                old_awake = awake
                awake, front = _bottom_up_step(n, in_lists, parent, front, put)
                if not (awake >= old_awake or awake > n // beta):
                    break
            queue = [u for u in range(n) if front[u]]
            scout_count = 1
        else:
            edges_to_check -= scout_count
            scout_count, queue = _top_down_step(out_lists, parent, queue, put)

    out = np.asarray(parent, dtype=np.int64)
    out[out < 0] = -1
    return out
