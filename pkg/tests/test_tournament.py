import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from components.containment_checker import contains_subtournament
from components.family_generator import cyclic_triangle, family, singleton, transitive
from components.isomorphism import enumerate_tournaments
from components.tournament import (
    Ordering,
    Tournament,
    compose_chain,
    compose_delta,
    delta_blocks,
    delta_forward,
    mask_of,
    members,
    substitute,
)
from tests.strategies import tournaments
from utils.errors import TournamentValidationError


def test_build_cyclic_triangle():
    T = Tournament.build(3, [(0, 1), (1, 2), (2, 0)])
    assert T.rows() == ["010", "001", "100"]
    assert T == cyclic_triangle()
    assert T.scores() == (1, 1, 1)


@pytest.mark.parametrize(
    "edges, message",
    [
        ([(0, 0), (0, 1), (1, 2), (2, 0)], "loop at vertex 0"),
        ([(0, 1), (1, 0), (1, 2), (2, 0)], r"pair \{0,1\} assigned twice"),
        ([(0, 1), (1, 2)], r"pair \{0,2\} unassigned"),
        ([(0, 3)], "out of range"),
    ],
)
def test_build_rejects_bad_edges(edges, message):
    with pytest.raises(TournamentValidationError, match=message):
        Tournament.build(3, edges)


def test_from_matrix_checks_diagonal_and_symmetry():
    with pytest.raises(TournamentValidationError, match="loop at vertex 1"):
        Tournament.from_matrix([[0, 1], [0, 1]])
    with pytest.raises(TournamentValidationError, match="assigned twice"):
        Tournament.from_matrix([[0, 1], [1, 0]])
    with pytest.raises(TournamentValidationError, match="square"):
        Tournament.from_matrix([[0, 1, 0]])


def test_adjacency_matrix_is_read_only():
    T = transitive(3)
    assert T.adj.tolist() == [[False, True, True], [False, False, True], [False, False, False]]
    with pytest.raises(ValueError):
        T.adj[0, 0] = True


def test_masks_round_trip():
    assert members(mask_of([5, 0, 3])) == (0, 3, 5)
    assert members(0) == ()


def test_transitivity():
    assert transitive(5).is_transitive()
    assert not cyclic_triangle().is_transitive()
    D3 = family("D", 3)
    assert D3.is_transitive_set({1, 4, 5})
    assert not D3.is_transitive_set([1, 2, 3])
    assert D3.transitive_order(mask_of([0, 1, 2])) == (0, 1, 2)


def test_induced_keeps_list_order():
    C = cyclic_triangle()
    assert C.induced([2, 0]).rows() == ["01", "00"]
    assert C.induced({2, 0}).rows() == ["00", "10"]
    with pytest.raises(TournamentValidationError):
        C.induced([0, 0])


def test_strong_components_follow_the_chain():
    T = compose_chain(cyclic_triangle(), singleton())
    assert T.strong_components() == [(0, 1, 2), (3,)]
    assert not T.is_strong()
    assert compose_chain(singleton(), cyclic_triangle()).strong_components() == [(0,), (1, 2, 3)]


def test_delta_composition_of_singletons_is_cyclic():
    assert compose_delta([singleton(), singleton(), singleton()]) == cyclic_triangle()
    assert compose_delta([transitive(2)]) == transitive(2)
    with pytest.raises(TournamentValidationError):
        compose_delta([singleton(), singleton()])
    with pytest.raises(TournamentValidationError):
        compose_delta([])


def test_delta_forward_rule():
    assert delta_forward(1, 2)
    assert delta_forward(2, 4)
    assert not delta_forward(1, 3)
    assert not delta_forward(3, 5)


def test_delta_blocks_match_d3_layout():
    assert delta_blocks([1, 3, 3]) == [(0,), (1, 2, 3), (4, 5, 6)]
    D3 = family("D", 3)
    assert all(D3.beats(0, v) for v in (1, 2, 3))
    assert all(D3.beats(v, 0) for v in (4, 5, 6))
    assert all(D3.beats(u, v) for u in (1, 2, 3) for v in (4, 5, 6))


def test_substitute_relabels_consecutively():
    T = substitute(cyclic_triangle(), 1, transitive(2))
    expected = Tournament.build(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)])
    assert T == expected
    with pytest.raises(TournamentValidationError):
        substitute(cyclic_triangle(), 3, singleton())


def test_apex_splits_of_d3():
    assert (0, (1, 2, 3), (4, 5, 6)) in list(family("D", 3).apex_splits())
    assert list(transitive(3).apex_splits()) == []


def test_ordering_validation():
    with pytest.raises(ValidationError):
        Ordering(seq=(0, 0))
    assert Ordering.from_phi((3, 1, 2)).seq == (1, 2, 0)
    assert Ordering.identity(3).positions == [0, 1, 2]
    assert Ordering(seq=(2, 0, 1)).restrict({0, 2}) == (2, 0)


@given(tournaments(max_n=7))
def test_scores_sum_to_pair_count(T):
    assert sum(T.scores()) == T.n * (T.n - 1) // 2


@given(tournaments(max_n=7))
def test_complement_is_an_involution(T):
    assert T.complement().complement() == T
    assert all(T.beats(u, v) != T.complement().beats(u, v) for u, v in T.edges())


@given(tournaments(max_n=7))
def test_transitive_iff_acyclic(T):
    assert T.is_transitive() == nx.is_directed_acyclic_graph(T.to_networkx())


@given(tournaments(max_n=6))
def test_matrix_round_trip(T):
    assert Tournament.from_matrix(np.asarray(T.adj)) == T


@st.composite
def delta_block_lists(draw):
    count = draw(st.sampled_from([1, 3, 5]))
    return draw(st.lists(tournaments(max_n=3), min_size=count, max_size=count))


@given(delta_block_lists())
def test_delta_blocks_recover_the_composed_parts(blocks):
    T = compose_delta(blocks)
    parts = delta_blocks([b.n for b in blocks])
    assert [T.induced(list(part)) for part in parts] == blocks
    for i, j in itertools.combinations(range(len(parts)), 2):
        forward = delta_forward(i + 1, j + 1)
        assert all(T.beats(u, v) == forward for u in parts[i] for v in parts[j])


def test_strong_components_are_complete_in_order():
    for n in range(1, 7):
        for T in enumerate_tournaments(n):
            parts = T.strong_components()
            assert sorted(v for part in parts for v in part) == list(range(n))
            assert all(T.induced(list(part)).is_strong() for part in parts)
            for i, j in itertools.combinations(range(len(parts)), 2):
                assert all(T.beats(u, v) for u in parts[i] for v in parts[j]), (T.rows(), parts)


def test_transitive_sets_are_the_triangle_free_ones():
    C = cyclic_triangle()
    for n in range(1, 6):
        for T in enumerate_tournaments(n):
            for mask in range(1 << n):
                S = members(mask)
                assert T.is_transitive_set(S) == (contains_subtournament(T.induced(S), C) is None), (T.rows(), S)
