import pytest
from hypothesis import given, seed
from hypothesis import strategies as st

from walkless import (
    NodeOutOfRange,
    ParseError,
    RemovalNotPresent,
    ValidationError,
    coin_directions,
    complete_graph,
    parse_graph,
    random_graph,
    remove_edges,
    serialize_graph,
)


def test_complete_2_graph_enumeration():
    g = complete_graph(2)
    assert g.n_nodes == 2
    assert g.edges == {(1, 1), (1, 2), (2, 2)}
    assert g.padded_from is None


def test_complete_3_graph_pads_to_4():
    g = complete_graph(3)
    assert g.n_nodes == 4
    assert g.padded_from == 3
    assert len(g.edges) == 6  # C(3,2) + 3 self loops
    assert g.neighbors(4) == ()


def test_complete_6_graph_edge_count():
    g = complete_graph(6)
    assert g.n_nodes == 8
    assert len(g.edges) == 21
    assert all(j <= 6 and k <= 6 for j, k in g.edges)


def test_remove_edges():
    g = remove_edges(complete_graph(2), [(1, 2)])
    assert g.edges == {(1, 1), (2, 2)}
    assert g.neighbors(1) == (1,)

    g = remove_edges(complete_graph(2), [(1, 1)])
    assert g.edges == {(1, 2), (2, 2)}


def test_remove_absent_edge_rejected():
    g = remove_edges(complete_graph(2), [(1, 2)])
    with pytest.raises(RemovalNotPresent):
        remove_edges(g, [(1, 2)])
    with pytest.raises(NodeOutOfRange):
        remove_edges(g, [(1, 9)])


def test_remove_all_edges_empties_every_neighbor_set():
    g = complete_graph(4)
    bare = remove_edges(g, sorted(g.edges))
    assert all(bare.neighbors(j) == () for j in range(1, 5))


def test_coin_directions():
    assert coin_directions(complete_graph(2), 1).allowed == (1, 2)
    g = remove_edges(complete_graph(2), [(1, 1)])
    assert coin_directions(g, 1).allowed == (2,)
    assert coin_directions(complete_graph(3), 4).allowed == ()
    with pytest.raises(NodeOutOfRange):
        coin_directions(complete_graph(2), 3)


def test_undirected_symmetry():
    g = random_graph(8, seed=5)
    for j in range(1, 9):
        for k in g.neighbors(j):
            assert j in g.neighbors(k)


def test_parse_graph():
    g = parse_graph('{"nodes":2,"edges":[[1,1],[1,2],[2,2]]}')
    assert g.edges == complete_graph(2).edges

    g = parse_graph('{"nodes":3,"edges":[[1,2],[2,3]]}')
    assert g.n_nodes == 4
    assert g.padded_from == 3


def test_parse_graph_rejects_bad_input():
    with pytest.raises(ValidationError):
        parse_graph('{"nodes":2,"edges":[[1,3]]}')
    with pytest.raises(ValidationError):
        parse_graph('{"nodes":2,"edges":[[1,2],[2,1]]}')  # duplicate pair
    with pytest.raises(ParseError):
        parse_graph('{"nodes":2}')
    with pytest.raises(ParseError):
        parse_graph("not json")
    with pytest.raises(ParseError):
        parse_graph('{"nodes":2,"edges":[[1]]}')
    with pytest.raises(ValidationError):
        parse_graph('{"nodes":0,"edges":[]}')


@seed(2)
@given(
    n=st.integers(min_value=1, max_value=9),
    picks=st.sets(st.tuples(st.integers(1, 9), st.integers(1, 9)), max_size=20),
)
def test_parse_serialize_round_trip(n, picks):
    edges = sorted({(min(j, k), max(j, k)) for j, k in picks if j <= n and k <= n})
    text = (
        '{"nodes":' + str(n) + ',"edges":['
        + ",".join(f"[{j},{k}]" for j, k in edges)
        + "]}"
    )
    g = parse_graph(text)
    again = parse_graph(serialize_graph(g))
    assert again.edges == g.edges
    assert again.n_nodes == g.n_nodes


def test_isolation_mask_matches_allowed_states():
    g = remove_edges(complete_graph(4), [(1, 3), (2, 2)])
    mask = g.isolation_mask()
    assert mask[0, 2] and mask[2, 0]
    assert mask[1, 1]
    assert not mask[0, 1]
    assert bool(mask[3, 3]) == (not g.has_edge(4, 4))


def test_random_graph_is_deterministic_and_removes_enough():
    a = random_graph(8, seed=3)
    b = random_graph(8, seed=3)
    assert a.edges == b.edges
    full = len(complete_graph(8).edges)
    assert len(a.edges) <= full * 0.7
    assert random_graph(8, seed=4).edges != a.edges


def test_edge_on_padded_node_rejected():
    with pytest.raises(ValidationError):
        parse_graph('{"nodes":3,"edges":[[1,4]]}')
