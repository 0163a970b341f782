import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphlim import (CapExceeded, PreconditionError, are_isomorphic,
                      canonical_form, discrete_graph, edge_graph,
                      enumerate_graphs, induced_subgraph, isolated_vertices,
                      new_graph, terminal_graph)

import helpers


def test_enumeration_counts_match_bucketing_oracle():
    for n in range(1, 5):
        assert len(enumerate_graphs(n)) == helpers.iso_class_count(n)


def test_enumeration_members_pairwise_nonisomorphic():
    for n in range(1, 5):
        reps = enumerate_graphs(n)
        for i, g in enumerate(reps):
            for h in reps[i + 1:]:
                assert not helpers.brute_isomorphic(g.n, g.edges, h.n, h.edges)


def test_every_labeled_graph_isomorphic_to_some_representative():
    reps = enumerate_graphs(3)
    for edges in helpers.labeled_graphs(3):
        hits = [g for g in reps
                if helpers.brute_isomorphic(3, edges, g.n, g.edges)]
        assert len(hits) == 1


@settings(max_examples=80)
@given(st.data())
def test_canonical_form_is_relabeling_invariant(data):
    n = data.draw(st.integers(1, 5))
    edges = data.draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
        .filter(lambda e: e[0] != e[1])
        .map(lambda e: (min(e), max(e)))))
    g = new_graph(n, edges)
    perm = data.draw(st.permutations(range(n)))
    h = new_graph(n, [(min(perm[a], perm[b]), max(perm[a], perm[b]))
                      for a, b in edges])
    assert canonical_form(g) == canonical_form(h)
    assert are_isomorphic(g, h)


def test_are_isomorphic_agrees_with_brute_force_on_four_vertices():
    import random
    rng = random.Random(20260819)
    pool = helpers.labeled_graphs(4)
    for _ in range(60):
        e1, e2 = rng.choice(pool), rng.choice(pool)
        expected = helpers.brute_isomorphic(4, e1, 4, e2)
        assert are_isomorphic(new_graph(4, e1), new_graph(4, e2)) == expected


def test_new_graph_sorts_and_dedups():
    g = new_graph(3, [(2, 1), (1, 2), (0, 1)])
    assert g.edges == ((0, 1), (1, 2))


def test_new_graph_rejects_bad_input():
    with pytest.raises(PreconditionError):
        new_graph(0, [])
    with pytest.raises(PreconditionError):
        new_graph(2, [(0, 2)])
    # loops denote the reflexive part, which is always there: stripped
    assert new_graph(2, [(1, 1)]).edges == ()


def test_adjacency_is_reflexive_and_symmetric():
    g = new_graph(3, [(0, 2)])
    adj = g.adjacency
    assert adj[0, 0] and adj[1, 1] and adj[2, 2]
    assert adj[0, 2] and adj[2, 0]
    assert not adj[0, 1]


def test_canonical_cap_is_enforced():
    with pytest.raises(CapExceeded):
        canonical_form(discrete_graph(9))


def test_induced_subgraph_keeps_internal_edges():
    g = new_graph(4, [(0, 1), (1, 2), (2, 3)])
    h, keep = induced_subgraph(g, [1, 2])
    assert h.n == 2 and h.edges == ((0, 1),)
    assert keep == (1, 2)


def test_isolated_vertices_reflexive_convention():
    g = new_graph(4, [(1, 2)])
    assert isolated_vertices(g) == frozenset({0, 3})
    assert isolated_vertices(discrete_graph(3)) == frozenset({0, 1, 2})


def test_named_constructors():
    assert terminal_graph().n == 1
    assert edge_graph().edges == ((0, 1),)
    assert discrete_graph(4).edges == ()
