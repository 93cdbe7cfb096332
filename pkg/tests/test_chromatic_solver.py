import itertools

import networkx as nx
import pytest
from hypothesis import given

from components.chromatic_solver import (
    ChromaticSolver,
    Coloring,
    can_extend,
    chromatic_bounds,
    chromatic_number,
    find_k_coloring,
    is_valid_coloring,
    maximal_transitive_sets,
)
from components.containment_checker import contains_subtournament
from components.family_generator import cyclic_triangle, family, transitive
from components.isomorphism import enumerate_tournaments
from components.tournament import mask_of, members
from tests.strategies import tournaments
from utils.errors import PreconditionError, SizeLimitError, UndecidedError


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_chi_of_d(n):
    k, coloring = chromatic_number(family("D", n))
    assert k == n
    assert is_valid_coloring(family("D", n), coloring)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_chi_of_a(n):
    assert chromatic_number(family("A", n))[0] == n


def test_small_values():
    assert chromatic_number(transitive(6))[0] == 1
    assert chromatic_number(cyclic_triangle())[0] == 2
    assert chromatic_number(family("S", 3))[0] == 2
    assert find_k_coloring(family("D", 3), 2) is None
    assert find_k_coloring(family("D", 4), 3) is None


def test_coloring_model():
    coloring = Coloring.from_classes(4, [(0, 2), (1,), (3,)])
    assert coloring.assign == (0, 1, 0, 2)
    assert coloring.k == 3
    assert coloring.classes() == [(0, 2), (1,), (3,)]
    assert Coloring(assign=(5, 2, 5)).compacted().assign == (0, 1, 0)
    with pytest.raises(PreconditionError, match="coloured twice"):
        Coloring.from_classes(2, [(0, 1), (1,)])
    with pytest.raises(PreconditionError, match="left uncoloured"):
        Coloring.from_classes(2, [(0,)])


def test_validity_needs_matching_length():
    with pytest.raises(PreconditionError):
        is_valid_coloring(cyclic_triangle(), Coloring(assign=(0, 0)))
    assert not is_valid_coloring(cyclic_triangle(), Coloring(assign=(0, 0, 0)))


def test_can_extend_detects_triangles():
    C = cyclic_triangle()
    assert can_extend(C, mask_of([0]), 1)
    assert not can_extend(C, mask_of([0, 1]), 2)


def test_maximal_transitive_sets_of_the_triangle():
    C = cyclic_triangle()
    found = [members(m) for m in maximal_transitive_sets(C, C.vertex_mask, 0)]
    assert found == [(0, 1), (0, 2)]


def test_bounds():
    lower, upper, greedy = chromatic_bounds(family("D", 3))
    assert lower == 2
    assert upper >= 3
    assert is_valid_coloring(family("D", 3), greedy)
    assert chromatic_bounds(transitive(4))[:2] == (1, 1)


def test_size_limit(settings_override):
    settings_override(chromatic_max_n=6)
    with pytest.raises(SizeLimitError):
        chromatic_number(family("D", 3))


def test_branch_and_bound():
    solver = ChromaticSolver(family("D", 3))
    assert solver.branch_and_bound_coloring(2) is None
    coloring = solver.branch_and_bound_coloring(3)
    assert coloring is not None and coloring.k <= 3
    assert is_valid_coloring(family("D", 3), coloring)


def test_branch_and_bound_budget():
    with pytest.raises(UndecidedError):
        ChromaticSolver(family("D", 4)).branch_and_bound_coloring(3, node_limit=5)


@given(tournaments(max_n=8))
def test_exact_colouring_is_valid_and_within_greedy(T):
    k, coloring = chromatic_number(T)
    assert is_valid_coloring(T, coloring)
    assert coloring.k == k
    lower, upper, _ = chromatic_bounds(T)
    assert lower <= k <= upper
    if k > 1:
        assert find_k_coloring(T, k - 1) is None


def _partition_chi(T):
    """Smallest k <= 3 with an assignment into k acyclic classes, tried exhaustively."""
    graph = T.to_networkx()
    for k in (1, 2, 3):
        for assign in itertools.product(range(k), repeat=T.n):
            classes = [[v for v in range(T.n) if assign[v] == c] for c in range(k)]
            if all(nx.is_directed_acyclic_graph(graph.subgraph(cls)) for cls in classes):
                return k
    return None


@pytest.mark.parametrize("max_n", [4, pytest.param(6, marks=pytest.mark.slow)])
def test_chi_matches_partition_oracle(max_n):
    for n in range(1, max_n + 1):
        for T in enumerate_tournaments(n):
            assert chromatic_number(T)[0] == _partition_chi(T), T.rows()


def test_chi_of_the_complement():
    C = cyclic_triangle()
    for n in range(1, 7):
        for T in enumerate_tournaments(n):
            k = chromatic_number(T)[0]
            assert chromatic_number(T.complement())[0] == k, T.rows()
            assert (k == 1) == T.is_transitive() == (contains_subtournament(T, C) is None)


def test_chi_never_grows_on_subtournaments():
    for n in range(2, 6):
        for T in enumerate_tournaments(n):
            k = chromatic_number(T)[0]
            for mask in range(1, 1 << n):
                assert chromatic_number(T.induced_mask(mask))[0] <= k, (T.rows(), members(mask))
