"""Brute-force reference implementations, written independently of the kernels."""
from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np


def adjacency(g):
    return [set(g.out_neigh(u).tolist()) for u in range(g.num_nodes)]


def bfs_depths(g, source):
    depth = [-1] * g.num_nodes
    depth[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for v in g.out_neigh(u):
            v = int(v)
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                q.append(v)
    return depth


def depths_from_parents(parent, source):
    """Walk each parent chain; returns -1 for unreached vertices."""
    n = len(parent)
    depth = [-1] * n
    for u in range(n):
        if parent[u] < 0:
            continue
        d, w = 0, u
        while w != source:
            w = int(parent[w])
            d += 1
            if d > n:
                raise AssertionError("parent chain does not reach the source")
        depth[u] = d
    return depth


def components(g):
    """Weakly connected components as a frozenset of frozensets."""
    adj = [set() for _ in range(g.num_nodes)]
    for u, v in g.edge_array().tolist():
        adj[u].add(v)
        adj[v].add(u)
    seen = [False] * g.num_nodes
    parts = []
    for s in range(g.num_nodes):
        if seen[s]:
            continue
        seen[s] = True
        part, stack = [s], [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    part.append(v)
                    stack.append(v)
        parts.append(frozenset(part))
    return frozenset(parts)


def partition_of(labels):
    groups = {}
    for u, c in enumerate(np.asarray(labels).tolist()):
        groups.setdefault(c, set()).add(u)
    return frozenset(frozenset(s) for s in groups.values())


def triangles(g):
    adj = adjacency(g)
    return sum(1 for a, b, c in combinations(range(g.num_nodes), 3)
               if b in adj[a] and c in adj[a] and c in adj[b])


def brandes(g, sources):
    """Textbook Brandes (unnormalized); the source's own dependency is skipped."""
    n = g.num_nodes
    bc = [0.0] * n
    for s in sources:
        stack, pred = [], [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s], dist[s] = 1, 0
        q = deque([s])
        while q:
            v = q.popleft()
            stack.append(v)
            for w in g.out_neigh(v).tolist():
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    pred[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in pred[w]:
                delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return np.array(bc)
