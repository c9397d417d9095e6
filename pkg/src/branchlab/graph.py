"""
Graph substrate: edge-list ingestion, synthetic generators, CSR graphs and
vertex reorderings.

All kernels consume a :class:`Graph`, an immutable pair of CSR views
(out-neighbors and in-neighbors) over dense vertex ids ``0..n-1``. Targets
inside each vertex range are sorted ascending, which triangle counting relies
on for its merge intersection.

Random generators use numpy's ``PCG64`` bit generator
(``numpy.random.default_rng(seed)``), so a given (parameters, seed) pair
always yields the same edge list.
"""
from __future__ import annotations

import gzip
import io
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

FORMATS = ("snap-txt", "el")
MAX_KRONECKER_SCALE = 24
RMAT_PROBS = (0.57, 0.19, 0.19, 0.05)


class GraphFormatError(ValueError):
    """Raised when an edge-list file cannot be parsed."""


class PermutationError(ValueError):
    """Raised when a relabeling is not a bijection over the vertex set."""


@dataclass(eq=False)
class EdgeList:
    """Raw (src, dst) pairs, ids not yet densified.

    ``num_nodes`` is set by the generators, whose ids already cover
    ``0..num_nodes-1``; ingested files leave it ``None`` and get densified.
    """

    edges: np.ndarray
    directed: bool = True
    num_nodes: int | None = None

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if self.edges.size and self.edges.min() < 0:
            raise ValueError("vertex ids must be non-negative")

    def __len__(self) -> int:
        return len(self.edges)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def __eq__(self, other):
        if not isinstance(other, EdgeList):
            return NotImplemented
        return (
            self.directed == other.directed
            and self.num_nodes == other.num_nodes
            and np.array_equal(self.edges, other.edges)
        )


def _csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    targets = dst[order].astype(np.int64)
    counts = np.bincount(src, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets, targets


@dataclass(frozen=True, eq=False)
class Graph:
    """Directed graph in CSR form with both out- and in-neighbor views.

    Undirected inputs are stored with every edge present in both directions,
    so ``out`` and ``in`` views coincide.
    """

    num_nodes: int
    out_offsets: np.ndarray
    out_targets: np.ndarray
    in_offsets: np.ndarray
    in_targets: np.ndarray
    directed: bool = True

    def __post_init__(self):
        self.check()

    @classmethod
    def from_arrays(cls, n: int, src, dst, directed: bool = True) -> "Graph":
        """Build from already dense, simple (deduplicated, loop-free) edges."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        out_off, out_tgt = _csr(n, src, dst)
        in_off, in_tgt = _csr(n, dst, src)
        for arr in (out_off, out_tgt, in_off, in_tgt):
            arr.setflags(write=False)
        return cls(n, out_off, out_tgt, in_off, in_tgt, directed)

    def check(self) -> None:
        n = self.num_nodes
        for name, off, tgt in (
            ("out", self.out_offsets, self.out_targets),
            ("in", self.in_offsets, self.in_targets),
        ):
            if len(off) != n + 1 or off[0] != 0 or off[-1] != len(tgt):
                raise ValueError(f"{name}_offsets inconsistent with targets")
            if np.any(np.diff(off) < 0):
                raise ValueError(f"{name}_offsets not monotone")
            if len(tgt) and (tgt.min() < 0 or tgt.max() >= n):
                raise ValueError(f"{name}_targets out of range")
            # sorted within each vertex range: descents only at range starts
            if len(tgt) > 1:
                desc = np.flatnonzero(np.diff(tgt) < 0) + 1
                starts = off[1:-1]
                if not np.isin(desc, starts).all():
                    raise ValueError(f"{name}_targets not sorted per vertex")
        if len(self.out_targets) != len(self.in_targets):
            raise ValueError("out and in views disagree on edge count")

    @property
    def num_edges_directed(self) -> int:
        return len(self.out_targets)

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_offsets)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_offsets)

    def out_neigh(self, u: int) -> np.ndarray:
        return self.out_targets[self.out_offsets[u]:self.out_offsets[u + 1]]

    def in_neigh(self, u: int) -> np.ndarray:
        return self.in_targets[self.in_offsets[u]:self.in_offsets[u + 1]]

    def edge_array(self) -> np.ndarray:
        """All directed edges as an (m, 2) array, sorted by (src, dst)."""
        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), self.out_degrees())
        return np.column_stack([src, self.out_targets])

    # Plain-list adjacency for the instrumented kernels: indexing Python
    # lists is several times faster than indexing numpy scalars.
    @cached_property
    def out_lists(self) -> list[list[int]]:
        tg = self.out_targets.tolist()
        off = self.out_offsets.tolist()
        return [tg[off[i]:off[i + 1]] for i in range(self.num_nodes)]

    @cached_property
    def in_lists(self) -> list[list[int]]:
        if not self.directed:
            return self.out_lists
        tg = self.in_targets.tolist()
        off = self.in_offsets.tolist()
        return [tg[off[i]:off[i + 1]] for i in range(self.num_nodes)]

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and self.directed == other.directed
            and np.array_equal(self.out_offsets, other.out_offsets)
            and np.array_equal(self.out_targets, other.out_targets)
            and np.array_equal(self.in_offsets, other.in_offsets)
            and np.array_equal(self.in_targets, other.in_targets)
        )

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self.num_nodes}, m={self.num_edges_directed})"


@dataclass(frozen=True, eq=False)
class Permutation:
    """Relabeling map: ``new_id_of[old] == new``."""

    new_id_of: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.new_id_of, dtype=np.int64)
        object.__setattr__(self, "new_id_of", arr)
        if not np.array_equal(np.sort(arr), np.arange(len(arr))):
            raise PermutationError("new_id_of is not a bijection over 0..n-1")

    def __len__(self) -> int:
        return len(self.new_id_of)

    @classmethod
    def from_order(cls, order: np.ndarray) -> "Permutation":
        """``order[k]`` is the old id placed at position (new id) ``k``."""
        new_id_of = np.empty(len(order), dtype=np.int64)
        new_id_of[order] = np.arange(len(order), dtype=np.int64)
        return cls(new_id_of)

    def tolist(self) -> list[int]:
        return self.new_id_of.tolist()


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def ingest_edge_list(text: bytes | str | Iterable[str], fmt: str = "el",
                     directed: bool = True) -> EdgeList:
    """Parse SNAP text (``src<TAB>dst`` with ``#`` comments) or ``.el`` pairs.

    Both formats tolerate any whitespace between the two ids, blank lines and
    CRLF endings. Errors name the 1-based line number.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown edge-list format {fmt!r}; expected one of {FORMATS}")
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = io.StringIO(text) if isinstance(text, str) else text

    src: list[int] = []
    dst: list[int] = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 2 ids, got {len(parts)} tokens")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        src.append(u)
        dst.append(v)
    if not src:
        raise GraphFormatError("empty edge list")
    return EdgeList(np.column_stack([src, dst]), directed=directed)


def load_edge_list(path, fmt: str | None = None, directed: bool = True) -> EdgeList:
    """Read an edge-list file (optionally ``.gz``); format defaults from the extension."""
    path = str(path)
    plain = path[:-3] if path.endswith(".gz") else path
    if fmt is None:
        fmt = "el" if plain.endswith(".el") else "snap-txt"
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "rt", encoding="utf-8") as fh:
        return ingest_edge_list(fh, fmt, directed=directed)


def write_edge_list(edges: EdgeList | np.ndarray, path) -> int:
    """Write ``src dst`` lines (``.el``); returns the number of lines."""
    arr = edges.edges if isinstance(edges, EdgeList) else np.asarray(edges)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{u} {v}\n" for u, v in arr.tolist())
    return len(arr)


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def build_graph(el: EdgeList) -> Graph:
    """Densify ids, drop self-loops and duplicates, and build both CSR views."""
    edges = el.edges
    if el.num_nodes is not None:
        n = int(el.num_nodes)
        if len(edges) and edges.max() >= n:
            raise ValueError("edge endpoint exceeds num_nodes")
        src, dst = edges[:, 0], edges[:, 1]
    else:
        ids, inverse = np.unique(edges.ravel(), return_inverse=True)
        n = len(ids)
        inverse = inverse.reshape(-1, 2)
        src, dst = inverse[:, 0], inverse[:, 1]

    keep = src != dst
    src, dst = src[keep], dst[keep]
    if not el.directed:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
    if len(src):
        key = np.unique(src * n + dst)
        src, dst = key // n, key % n
    return Graph.from_arrays(n, src, dst, directed=el.directed)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def gen_uniform(n: int, m: int, seed: int, directed: bool = False) -> EdgeList:
    """``m`` edges with endpoints uniform over ``0..n-1`` (PCG64 stream)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    rng = np.random.default_rng(seed)
    edges = rng.integers(0, n, size=(m, 2), dtype=np.int64)
    return EdgeList(edges, directed=directed, num_nodes=n)


def gen_kronecker(scale: int, edge_factor: int, seed: int,
                  directed: bool = False) -> EdgeList:
    """R-MAT edges over ``2**scale`` vertices, then a seeded id shuffle.

    Quadrant probabilities are (A, B, C, D) = (0.57, 0.19, 0.19, 0.05). As in
    the GAP generator, vertex ids are randomly permuted afterwards so hubs do
    not sit at the lowest ids.
    """
    if not 0 <= scale <= MAX_KRONECKER_SCALE:
        raise ValueError(f"scale must be in [0, {MAX_KRONECKER_SCALE}]")
    if edge_factor < 0:
        raise ValueError("edge_factor must be >= 0")
    n = 1 << scale
    m = edge_factor * n
    rng = np.random.default_rng(seed)
    a, b, c, _ = RMAT_PROBS
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for bit in range(scale):
        r = rng.random(m)
        src_bit = r >= a + b
        dst_bit = ((r >= a) & (r < a + b)) | (r >= a + b + c)
        src |= src_bit.astype(np.int64) << bit
        dst |= dst_bit.astype(np.int64) << bit
    perm = rng.permutation(n)
    return EdgeList(np.column_stack([perm[src], perm[dst]]), directed=directed,
                    num_nodes=n)


# ---------------------------------------------------------------------------
# reordering
# ---------------------------------------------------------------------------

def degree_sort(g: Graph) -> Permutation:
    """Descending out-degree; ties keep ascending original id."""
    deg = g.out_degrees()
    order = np.lexsort((np.arange(g.num_nodes), -deg))
    return Permutation.from_order(order)


def _hubs(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    deg = g.out_degrees()
    if g.num_nodes == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    is_hub = deg > deg.mean()
    return np.flatnonzero(is_hub), np.flatnonzero(~is_hub)


def hub_sort(g: Graph) -> Permutation:
    """Hubs (degree above the mean) first by descending degree, then the rest."""
    hubs, rest = _hubs(g)
    deg = g.out_degrees()
    hubs = hubs[np.argsort(-deg[hubs], kind="stable")]
    return Permutation.from_order(np.concatenate([hubs, rest]))


def hub_cluster(g: Graph) -> Permutation:
    """Hubs first in their original order, then the rest."""
    hubs, rest = _hubs(g)
    return Permutation.from_order(np.concatenate([hubs, rest]))


REORDERERS = {
    "degree_sort": degree_sort,
    "hub_sort": hub_sort,
    "hub_cluster": hub_cluster,
}


def apply_permutation(g: Graph, p: Permutation | np.ndarray) -> Graph:
    """Relabel every vertex ``u`` as ``p[u]`` and rebuild both CSR views."""
    if not isinstance(p, Permutation):
        p = Permutation(p)
    if len(p) != g.num_nodes:
        raise PermutationError(
            f"permutation has {len(p)} entries for a graph of {g.num_nodes} vertices")
    edges = g.edge_array()
    new = p.new_id_of
    return Graph.from_arrays(g.num_nodes, new[edges[:, 0]], new[edges[:, 1]],
                             directed=g.directed)


def reorder(g: Graph, method: str) -> Graph:
    if method == "none":
        return g
    try:
        fn = REORDERERS[method]
    except KeyError:
        raise ValueError(f"unknown reordering {method!r}") from None
    return apply_permutation(g, fn(g))
