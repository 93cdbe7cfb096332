import pytest

from components.family_generator import (
    FamilySpec,
    cyclic_triangle,
    family,
    family_size,
    generate,
    minimal_nonheroes,
    singleton,
    transitive,
)
from components.isomorphism import is_isomorphic
from components.tournament import Tournament, compose_delta
from utils.errors import SizeLimitError, TournamentValidationError


@pytest.mark.parametrize("n, size", [(1, 1), (2, 3), (3, 7), (4, 15), (5, 31)])
def test_d_sizes(n, size):
    assert family("D", n).n == size
    assert family_size(FamilySpec(family="D", param=n)) == size


@pytest.mark.parametrize("n, size", [(1, 1), (2, 3), (3, 9), (4, 31), (5, 129)])
def test_a_sizes(n, size):
    assert family("A", n).n == size
    assert family_size(FamilySpec(family="A", param=n)) == size


def test_small_members_are_cyclic_triangles():
    assert family("D", 2) == cyclic_triangle()
    assert family("A", 2) == cyclic_triangle()
    assert family("S", 2) == cyclic_triangle()
    assert is_isomorphic(family("U", 2), cyclic_triangle())


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_u_is_the_delta_composition_of_singletons(n):
    composed = compose_delta([singleton()] * (2 * n - 1))
    assert family("U", n) == composed
    assert is_isomorphic(family("U", n), composed)


def test_u3_rule():
    U3 = family("U", 3)
    assert U3.beats(2, 0) and U3.beats(4, 0) and U3.beats(4, 2)
    assert U3.beats(0, 1) and U3.beats(1, 4) and U3.beats(3, 4)


def test_n_edges():
    N = family("N")
    assert N.beats(0, 1) and N.beats(0, 3)
    assert N.beats(2, 0) and N.beats(4, 0)
    assert all(N.beats(i, j) for i in range(1, 5) for j in range(i + 1, 5))


def test_s_is_circulant():
    S4 = family("S", 4)
    assert all(S4.beats(i, (i + step) % 7) for i in range(7) for step in (1, 2, 3))
    assert set(S4.scores()) == {3}


def test_delta2_layout():
    Delta2 = family("Delta2")
    assert Delta2.rows() == ["011100", "001100", "000111", "000011", "110001", "110000"]


def test_transitive_is_a_chain():
    assert transitive(4).scores() == (3, 2, 1, 0)


@pytest.mark.parametrize(
    "tokens, label",
    [(("d", "3"), "D_3"), (("D:3",), "D_3"), (("d3",), "D_3"), (("delta2",), "Delta2"), (("n",), "N"), (("S", 4), "S_4")],
)
def test_parse_accepts_common_spellings(tokens, label):
    assert FamilySpec.parse(*tokens).label == label


@pytest.mark.parametrize(
    "tokens, message",
    [
        (("x",), "unknown family"),
        (("d",), "needs a parameter"),
        (("d", "0"), ">= 1"),
        (("n", "2"), "takes no parameter"),
        (("d", "three"), "not an integer"),
        (("d3", "3"), "given twice"),
    ],
)
def test_parse_rejects(tokens, message):
    with pytest.raises(TournamentValidationError, match=message):
        FamilySpec.parse(*tokens)


def test_size_caps(settings_override):
    settings_override(d_max_n=4, a_max_n=3)
    with pytest.raises(SizeLimitError, match="HEROIX_D_MAX_N.*31 vertices"):
        generate(FamilySpec(family="D", param=5))
    with pytest.raises(SizeLimitError, match="HEROIX_A_MAX_N"):
        generate(FamilySpec(family="A", param=4))
    assert generate(FamilySpec(family="D", param=4)).n == 15


def test_minimal_nonheroes_order_and_sizes():
    named = minimal_nonheroes()
    assert list(named) == ["D3", "U3", "N", "S3", "Delta2"]
    assert [T.n for T in named.values()] == [7, 5, 5, 5, 6]
    assert all(isinstance(T, Tournament) for T in named.values())
