import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from branchlab.graph import (EdgeList, Graph, GraphFormatError, Permutation, PermutationError,
                             apply_permutation, build_graph, degree_sort, gen_kronecker,
                             gen_uniform, hub_cluster, hub_sort, ingest_edge_list, reorder)

from oracles import triangles


def undirected(pairs, n=None):
    return build_graph(EdgeList(np.array(pairs, dtype=np.int64).reshape(-1, 2),
                                directed=False, num_nodes=n))


def test_ingest_comments_crlf_and_whitespace():
    el = ingest_edge_list("# header\r\n0 1\r\n  1\t2  \n\n# x\n2 0\n")
    assert el.pairs() == [(0, 1), (1, 2), (2, 0)]


@pytest.mark.parametrize("text,line", [("0 1\n1 x\n", 2), ("0\n", 1), ("0 -1\n", 1)])
def test_ingest_errors_name_the_line(text, line):
    with pytest.raises(GraphFormatError, match=f"line {line}"):
        ingest_edge_list(text)


def test_ingest_empty_is_an_error():
    with pytest.raises(GraphFormatError):
        ingest_edge_list("# only a comment\n")


def test_build_drops_self_loops_and_duplicates():
    g = undirected([(0, 1), (1, 0), (0, 1), (2, 2), (1, 2)])
    assert g.num_nodes == 3
    assert g.out_neigh(1).tolist() == [0, 2]
    assert g.num_edges_directed == 4


def test_build_densifies_sparse_ids():
    g = build_graph(EdgeList(np.array([[10, 500], [500, 7]]), directed=True))
    assert g.num_nodes == 3
    assert g.num_edges_directed == 2


def test_directed_in_view_mirrors_out_view():
    g = build_graph(EdgeList(np.array([[0, 1], [0, 2], [2, 1]]), directed=True))
    assert g.in_neigh(1).tolist() == [0, 2]
    assert g.in_neigh(0).tolist() == []
    assert g.out_degrees().sum() == g.in_degrees().sum() == 3


def test_kron_scale4_keeps_all_vertices():
    el = gen_kronecker(4, 16, seed=1)
    assert el.num_nodes == 16 and len(el) == 256
    assert build_graph(el).num_nodes == 16


def test_generators_are_deterministic():
    assert gen_kronecker(6, 8, 3) == gen_kronecker(6, 8, 3)
    assert gen_uniform(50, 200, 9) == gen_uniform(50, 200, 9)
    assert gen_kronecker(6, 8, 3) != gen_kronecker(6, 8, 4)


@pytest.mark.parametrize("scale", [-1, 25])
def test_kron_scale_bounds(scale):
    with pytest.raises(ValueError):
        gen_kronecker(scale, 16, 1)


def test_degree_sort_star():
    # vertex 3 is the hub of a star
    g = undirected([(3, 0), (3, 1), (3, 2), (3, 4), (0, 1)])
    p = degree_sort(g)
    assert p.new_id_of[3] == 0
    assert sorted(p.tolist()) == list(range(5))


def test_hub_sort_and_cluster():
    # degrees: 0:1, 1:3, 2:2, 3:3, 4:1  -> mean 2, hubs {1, 3}
    g = undirected([(0, 1), (1, 2), (1, 3), (2, 3), (3, 4)])
    assert g.out_degrees().tolist() == [1, 3, 2, 3, 1]
    hc = hub_cluster(g).new_id_of.tolist()
    assert hc[1] == 0 and hc[3] == 1
    assert [hc[0], hc[2], hc[4]] == [2, 3, 4]
    hs = hub_sort(g).new_id_of.tolist()
    assert {hs[1], hs[3]} == {0, 1}


def test_permutation_validation():
    with pytest.raises(PermutationError):
        Permutation(np.array([0, 0, 1]))
    g = undirected([(0, 1)])
    with pytest.raises(PermutationError):
        apply_permutation(g, np.array([0, 1, 2]))


def test_reorder_unknown_method():
    with pytest.raises(ValueError):
        reorder(undirected([(0, 1)]), "bogus")


edge_lists = st.lists(st.tuples(st.integers(0, 30), st.integers(0, 30)), min_size=1,
                      max_size=120)


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_csr_invariants(pairs):
    g = undirected(pairs)
    g.check()
    for u in range(g.num_nodes):
        nb = g.out_neigh(u).tolist()
        assert nb == sorted(set(nb))
        assert u not in nb
        for v in nb:
            assert u in g.out_neigh(v).tolist()


@settings(max_examples=40, deadline=None)
@given(edge_lists, st.sampled_from(["degree_sort", "hub_sort", "hub_cluster"]))
def test_reordering_is_an_isomorphism(pairs, method):
    g = undirected(pairs)
    h = reorder(g, method)
    assert sorted(g.out_degrees().tolist()) == sorted(h.out_degrees().tolist())
    assert h.num_edges_directed == g.num_edges_directed
    assert triangles(g) == triangles(h)


def test_graph_equality_and_repr():
    a = undirected([(0, 1), (1, 2)])
    b = undirected([(1, 2), (0, 1)])
    assert a == b
    assert "undirected" in repr(a)
    assert isinstance(a, Graph)


def test_load_gzipped_snap(tmp_path):
    import gzip
    from branchlab.graph import load_edge_list
    p = tmp_path / "tiny.txt.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("# Directed graph\n# FromNodeId\tToNodeId\n0\t1\n1\t2\n2\t0\n")
    g = build_graph(load_edge_list(p, directed=True))
    assert g.num_nodes == 3 and g.num_edges_directed == 3
