import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwalk.errors import ConfigError
from qwalk.graphs import (
    Complete,
    Custom,
    Cycle,
    DiamondChain,
    Edgeless,
    Graph,
    Join,
    Path,
    build,
    canonical_key,
    complement,
    graph_from_json,
    graph_to_json,
)


def random_graph(seed: int, n: int, p: float = 0.4, loops: bool = False) -> Graph:
    rng = np.random.default_rng(seed)
    adj = np.triu((rng.random((n, n)) < p).astype(float), k=1)
    adj = adj + adj.T
    if loops:
        adj[np.diag_indices(n)] = (rng.random(n) < 0.3).astype(float)
    return Graph(adj)


# ----- family builders -----

def test_complete_graph_degrees():
    g = build(Complete(5))
    assert g.n == 5
    assert all(g.degree(v) == 4 for v in range(5))


def test_cycle_structure():
    g = build(Cycle(6))
    assert sorted(g.neighbors(0)) == [1, 5]
    assert all(g.degree(v) == 2 for v in range(6))


def test_cycle_too_small_message():
    with pytest.raises(ConfigError, match="cycle requires n ≥ 3"):
        build(Cycle(2))


def test_path_endpoints():
    g = build(Path(4))
    assert g.degree(0) == 1 and g.degree(3) == 1
    assert g.degree(1) == 2 and g.degree(2) == 2


def test_edgeless():
    g = build(Edgeless(3))
    assert g.n == 3
    assert g.edge_set() == set()


def test_join_hub_cycle_degrees():
    g = build(Join(Edgeless(2), Cycle(5)))
    assert g.n == 7
    assert sorted(g.degree(v) for v in range(7)) == [4, 4, 4, 4, 4, 5, 5]


def test_join_puts_first_part_first():
    g = build(Join(Edgeless(2), Cycle(4)))
    assert sorted(g.neighbors(0)) == [2, 3, 4, 5]
    assert sorted(g.neighbors(1)) == [2, 3, 4, 5]


def test_join_edge_count():
    g = build(Join(Edgeless(2), Edgeless(6)))
    assert len(g.edge_set()) == 12


def test_diamond_chain_shape():
    for n in (1, 2, 5):
        g = build(DiamondChain(n))
        assert g.n == 3 * n + 1
        degs = sorted(g.degree(v) for v in range(g.n))
        # ends have degree 2, shared corners degree 4, rest degree 2
        assert degs.count(4) == n - 1
        assert degs.count(2) == g.n - (n - 1)


def test_diamond_chain_loop_ends_degree():
    g = build(DiamondChain(3, loop_ends=True))
    assert g.has_loop(0) and g.has_loop(g.n - 1)
    assert sum(g.has_loop(v) for v in range(g.n)) == 2
    assert g.degree(0) == 3 and g.degree(g.n - 1) == 3


def test_custom_family():
    adj = np.array([[0.0, 1.0], [1.0, 0.0]])
    g = build(Custom(adj))
    assert g.edge_set() == {(0, 1)}


def test_bad_adjacency_rejected():
    with pytest.raises(ConfigError):
        Graph(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ConfigError):
        Graph(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(ConfigError):
        Graph(np.array([[0.0, np.nan], [np.nan, 0.0]]))


# ----- complement -----

def test_complement_of_complete_is_edgeless():
    g = complement(build(Complete(4)))
    assert g.edge_set() == set()


def test_cycle5_self_complementary():
    g = build(Cycle(5))
    assert canonical_key(complement(g)) == canonical_key(g)


@given(st.integers(0, 500), st.integers(2, 7))
@settings(max_examples=40, deadline=None)
def test_complement_involution(seed, n):
    g = random_graph(seed, n)
    assert np.array_equal(complement(complement(g)).adjacency, g.adjacency)


# ----- canonical keys -----

@given(st.integers(0, 500), st.integers(2, 7), st.permutations(list(range(7))))
@settings(max_examples=60, deadline=None)
def test_canonical_key_permutation_invariant(seed, n, perm):
    g = random_graph(seed, n)
    p = [x for x in perm if x < n]
    relabeled = Graph(g.adjacency[np.ix_(p, p)])
    assert canonical_key(relabeled) == canonical_key(g)


@given(st.integers(0, 500), st.integers(3, 7), st.permutations(list(range(7))))
@settings(max_examples=60, deadline=None)
def test_canonical_key_respects_marks(seed, n, perm):
    g = random_graph(seed, n)
    p = [x for x in perm if x < n]
    relabeled = Graph(g.adjacency[np.ix_(p, p)])
    marks = (0, n - 1)
    inv = {orig: new for new, orig in enumerate(p)}
    moved = tuple(inv[m] for m in marks)
    assert canonical_key(relabeled, marks=moved) == canonical_key(g, marks=marks)


def test_marks_distinguish_positions():
    g = build(Cycle(6))
    assert canonical_key(g, marks=(0, 3)) != canonical_key(g, marks=(0, 2))


def test_key_separates_cycle_from_path():
    assert canonical_key(build(Cycle(6))) != canonical_key(build(Path(6)))


def test_mark_out_of_range():
    with pytest.raises(ConfigError):
        canonical_key(build(Cycle(4)), marks=(0, 9))


# ----- JSON round trips -----

@given(st.integers(0, 500), st.integers(1, 7), st.booleans())
@settings(max_examples=50, deadline=None)
def test_json_round_trip(seed, n, loops):
    g = random_graph(seed, n, loops=loops)
    back = graph_from_json(graph_to_json(g))
    assert np.array_equal(back.adjacency, g.adjacency)


def test_json_schema_fields():
    data = json.loads(graph_to_json(build(DiamondChain(1, loop_ends=True))))
    assert set(data) == {"n", "edges", "loops"}
    assert data["n"] == 4
    assert data["loops"] == [0, 3]


def test_json_bad_inputs():
    with pytest.raises(ConfigError, match="invalid graph JSON"):
        graph_from_json("not json")
    with pytest.raises(ConfigError, match="missing field"):
        graph_from_json('{"n": 3, "edges": []}')
    with pytest.raises(ConfigError, match="out of range"):
        graph_from_json('{"n": 2, "edges": [[0, 5, 1.0]], "loops": []}')
