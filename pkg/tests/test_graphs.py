import random
import warnings

import pytest

from graph_sections import (
    DirectedGraph,
    DirectedRay,
    DisjointUnion,
    ExplicitFinite,
    FunctionGraph,
    InvalidKey,
    RegularTree,
    WindowExhausted,
    ZLine,
    ZSquare,
    ball,
    degree,
    enumerate_vertices,
    neighbors,
    window_connected,
)
from oracles import path_ball


def union_demo():
    tri = ExplicitFinite([("a", "b"), ("b", "c"), ("c", "a")])
    return DisjointUnion([("tri", tri), ("ray", DirectedRay())])


def test_neighbors_examples():
    assert neighbors(ZLine(), 0) == ([-1, 1], [-1, 1])
    out, inc = neighbors(RegularTree(3), ())
    assert len(out) == 3 and out == inc
    assert neighbors(DirectedRay(), 5) == ([6], [4])
    assert neighbors(DirectedRay(), 0) == ([1], [])


def test_neighbor_lists_sorted_and_unique():
    g = RegularTree(4)
    out, _ = neighbors(g, (1, 2))
    assert out == sorted(set(out), key=g.sort_key)
    assert out[0] == (1,)  # parent is the shortest key


def test_invalid_keys():
    with pytest.raises(InvalidKey):
        neighbors(ExplicitFinite([("a", "b")]), "z")
    with pytest.raises(InvalidKey):
        neighbors(DirectedRay(), -1)
    with pytest.raises(InvalidKey):
        neighbors(RegularTree(3), (0, 2))  # non-root vertices have d-1 children
    with pytest.raises(InvalidKey):
        ball(ZSquare(), 3, 1)


def test_degree():
    assert degree(ZSquare(), (0, 0)) == 4
    g = RegularTree(3)
    assert all(degree(g, v) == 3 for v in [(), (0,), (2, 1), (1, 0, 1)])
    with pytest.raises(DirectedGraph):
        degree(DirectedRay(), 3)


def test_degree_is_local_in_mixed_union():
    g = union_demo()
    assert degree(g, ("tri", "a")) == 2
    with pytest.raises(DirectedGraph):
        degree(g, ("ray", 1))


def test_ball_examples():
    assert ball(ZLine(), 0, 1) == {-1, 0, 1}
    assert ball(DirectedRay(), 5, 2) == {3, 4, 5, 6, 7}
    # hand BFS: root, 3 children, 3 * 2 grandchildren
    assert len(ball(RegularTree(3), (), 2)) == 1 + 3 + 6
    assert ball(ZSquare(), (0, 0), 0) == {(0, 0)}


def test_enumerate_examples():
    assert enumerate_vertices(ZLine(), [0], 5).order == (0, -1, 1, -2, 2)
    assert enumerate_vertices(ZLine(), [0], 5).layers == (0, 1, 1, 2, 2)
    tri = ExplicitFinite([("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.warns(WindowExhausted):
        e = enumerate_vertices(tri, ["a"], 5)
    assert e.order == ("a", "b", "c") and e.exhausted


def test_enumerate_union_roots_seed_layer_zero():
    g = union_demo()
    e = enumerate_vertices(g, [("tri", "a"), ("ray", 0)], 4)
    # both roots form layer 0, in the given order
    assert e.order == (("tri", "a"), ("ray", 0), ("tri", "b"), ("tri", "c"))
    assert e.layers == (0, 0, 1, 1)


def test_enumeration_index_inverts_order(family):
    _, g, root = family
    e = enumerate_vertices(g, [root], 60)
    assert len(set(e.order)) == len(e.order)
    assert all(e.vertex(e.index[v]) == v for v in e.order)
    assert all(e.position(e.vertex(j)) == j for j in range(1, 61))


def test_enumeration_layers_monotone_and_sorted(family):
    _, g, root = family
    e = enumerate_vertices(g, [root], 80)
    assert list(e.layers) == sorted(e.layers)
    for layer in set(e.layers):
        block = [v for v, l in zip(e.order, e.layers) if l == layer]
        if layer > 0:
            assert block == sorted(block, key=g.sort_key)


@pytest.mark.parametrize("m", range(0, 6))
def test_ball_enumeration_consistency(family, m):
    _, g, root = family
    b = ball(g, root, m)
    e = enumerate_vertices(g, [root], len(b) + 1)
    assert set(e.order[: len(b)]) == b


def test_ball_monotone(family):
    _, g, root = family
    rng = random.Random(3)
    e = enumerate_vertices(g, [root], 40)
    for v in rng.sample(e.order, 8):
        for n in range(5):
            assert ball(g, v, n) <= ball(g, v, n + 1)


def test_neighbor_purity(family):
    _, g, root = family
    e = enumerate_vertices(g, [root], 50)
    rng = random.Random(11)
    for _ in range(100):
        v = rng.choice(e.order)
        assert neighbors(g, v) == neighbors(g, v)


def test_simplicial_and_undirected_flags(family):
    _, g, root = family
    for v in enumerate_vertices(g, [root], 40).order:
        out, inc = neighbors(g, v)
        assert v not in out and out == inc


def _random_digraph(rng, n_vertices, n_edges):
    labels = [f"v{i}" for i in range(n_vertices)]
    edges = set()
    while len(edges) < n_edges:
        a, b = rng.sample(labels, 2)
        edges.add((a, b))
    return labels, sorted(edges)


@pytest.mark.parametrize("seed", range(12))
def test_ball_matches_path_enumeration(seed):
    rng = random.Random(seed)
    labels, edges = _random_digraph(rng, rng.randint(3, 12), rng.randint(2, 18))
    directed = bool(seed % 2)
    g = ExplicitFinite(edges, undirected=not directed, vertices=labels)
    oracle_edges = edges if directed else edges + [(b, a) for a, b in edges]
    for v in labels:
        for n in range(4):
            assert ball(g, v, n) == path_ball(oracle_edges, v, n)


def test_window_connected():
    assert window_connected(ZLine(), enumerate_vertices(ZLine(), [0], 5))
    g = union_demo()
    e = enumerate_vertices(g, [("tri", "a"), ("ray", 0)], 6)
    assert not window_connected(g, e)
    assert window_connected(ZSquare(), enumerate_vertices(ZSquare(), [(0, 0)], 1))


def test_key_text_round_trip():
    for g, keys in [
        (ZLine(), [-3, 0, 7]),
        (ZSquare(), [(0, 0), (-1, 2)]),
        (RegularTree(3), [(), (2,), (0, 1, 1)]),
        (union_demo(), [("tri", "a"), ("ray", 4)]),
    ]:
        for v in keys:
            assert g.parse_key(g.format_key(v)) == v


def test_function_graph():
    g = FunctionGraph(lambda v: [(v + 1) % 5, (v - 1) % 5], is_vertex=lambda v: v in range(5))
    assert neighbors(g, 0) == ([1, 4], [1, 4])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WindowExhausted)
        assert enumerate_vertices(g, [0], 10).order == (0, 1, 4, 2, 3)
