import pytest
from hypothesis import given

from components.family_generator import cyclic_triangle, family, singleton, transitive
from components.isomorphism import enumerate_tournaments, is_isomorphic
from components.structure_analyzer import (
    find_spine_delta_partition,
    find_trisection,
    homogeneous_closure,
    is_homogeneous,
    is_prime,
    iter_spine_partitions,
    maximal_homogeneous_sets,
    member_A,
    member_AF,
    member_D,
    recompose,
    substitution_decomposition,
)
from components.containment_checker import contains_subtournament, is_hero
from components.tournament import compose_chain, compose_delta, mask_of, members
from components.tournament_file import parse
from tests.strategies import tournaments
from utils.errors import PreconditionError


def test_homogeneous_sets_of_d3():
    D3 = family("D", 3)
    assert is_homogeneous(D3, {1, 2, 3})
    assert not is_homogeneous(D3, [0, 1])
    assert maximal_homogeneous_sets(D3) == [(1, 2, 3), (4, 5, 6)]
    assert members(homogeneous_closure(D3, [1, 2])) == (1, 2, 3)
    with pytest.raises(PreconditionError):
        is_homogeneous(D3, [0])


@pytest.mark.parametrize("name, param, prime", [("C", None, True), ("U", 3, True), ("S", 3, True), ("N", None, True), ("D", 3, False), ("Delta2", None, False)])
def test_primality(name, param, prime):
    assert is_prime(family(name, param)) == prime


def test_decomposition_of_d3():
    D3 = family("D", 3)
    tree = substitution_decomposition(D3)
    assert tree.kind == "prime"
    assert [child.vertices for child in tree.children] == [(0,), (1, 2, 3), (4, 5, 6)]
    assert tree.quotient == cyclic_triangle()
    assert tree.render()[0] == "prime [0 1 2 3 4 5 6]"


def test_decomposition_of_a_chain():
    T = compose_chain(cyclic_triangle(), transitive(2))
    tree = substitution_decomposition(T)
    assert tree.kind == "linear"
    assert [child.vertices for child in tree.children] == [(0, 1, 2), (3,), (4,)]
    assert tree.quotient.is_transitive()


@given(tournaments(max_n=7))
def test_recompose_rebuilds_the_tournament(T):
    rebuilt, labels = recompose(substitution_decomposition(T))
    assert sorted(labels) == list(range(T.n))
    assert rebuilt == T.induced(list(labels))


def test_trisection():
    assert find_trisection(family("D", 3)) == ((0,), (1, 2, 3), (4, 5, 6))
    assert find_trisection(transitive(3)) is None
    assert find_trisection(family("S", 3)) is None


def test_spine_partition_rebuilds_u3():
    U3 = family("U", 3)
    partition = find_spine_delta_partition(U3)
    assert partition is not None
    sequence = partition.sequence()
    order = [v for block in sequence for v in block]
    assert sorted(order) == list(range(5))
    assert U3.induced(order) == compose_delta([U3.induced(list(block)) for block in sequence])


def test_spine_partitions_of_a3_cover_every_vertex():
    A3 = family("A", 3)
    for spine, blocks in iter_spine_partitions(A3):
        covered = set(spine)
        for block in blocks:
            covered |= set(members(block))
        assert covered == set(range(A3.n))
        break
    with pytest.raises(PreconditionError):
        find_spine_delta_partition(transitive(3))


def test_membership_lemmas(nonheroes):
    expected_a = {"D3": False, "U3": True, "N": False, "S3": False, "Delta2": True}
    expected_af = {"D3": False, "U3": True, "N": False, "S3": False, "Delta2": False}
    for name, T in nonheroes.items():
        assert member_A(T).member == expected_a[name], name
        assert member_AF(T).member == expected_af[name], name


def test_member_d():
    assert member_D(family("D", 3)).member
    assert member_D(family("D", 4)).member
    assert member_D(transitive(4)).member
    assert not member_D(family("U", 3)).member
    assert not member_D(family("S", 3)).member
    derivation = member_D(family("D", 3)).derivation
    assert derivation.rule == "apex"
    assert derivation.children[0].rule == "singleton"
    with pytest.raises(PreconditionError):
        member_D(transitive(0))


def test_member_af_cases():
    assert member_AF(singleton()).case == 1
    assert member_AF(transitive(3)).case == 2
    assert member_AF(cyclic_triangle()).case == 3
    assert member_AF(family("U", 3)).case == 4


def test_d_membership_matches_embedding_oracle():
    for n in range(1, 5):
        host = family("D", n)
        for T in enumerate_tournaments(n):
            assert member_D(T).member == (contains_subtournament(host, T) is not None)


def test_a_membership_matches_embedding_oracle():
    for n in range(1, 4):
        host = family("A", n)
        for T in enumerate_tournaments(n):
            assert member_A(T).member == (contains_subtournament(host, T) is not None)


@pytest.mark.slow
def test_oracles_at_full_size():
    for T in enumerate_tournaments(5):
        assert member_D(T).member == (contains_subtournament(family("D", 5), T) is not None)
    for T in enumerate_tournaments(4):
        assert member_A(T).member == (contains_subtournament(family("A", 4), T) is not None)


def test_membership_ignores_labels():
    U3 = family("U", 3)
    shuffled = U3.induced([4, 2, 0, 3, 1])
    assert is_isomorphic(U3, shuffled)
    assert member_A(shuffled).member
    assert member_AF(shuffled).case == 4


def _block_masks(T):
    return {block for _, blocks in iter_spine_partitions(T, allow_empty=True) for block in blocks if block}


def test_homogeneous_set_only_blocks_a_partition_with_an_empty_block():
    T, _ = parse("5\n01000\n00101\n10010\n11000\n10110\n")
    assert T.is_strong()
    assert contains_subtournament(family("A", 4), T) is not None
    assert member_A(T).member
    assert maximal_homogeneous_sets(T) == [(0, 3), (2, 4)]
    assert find_spine_delta_partition(T) is None
    assert ((2, 4, 1), [0, mask_of((0, 3))]) in list(iter_spine_partitions(T, allow_empty=True))
    assert {mask_of((0, 3)), mask_of((2, 4))} <= _block_masks(T)


@pytest.mark.slow
def test_maximal_homogeneous_sets_of_strong_a_members_are_blocks():
    for n in range(3, 8):
        for T in enumerate_tournaments(n):
            if not T.is_strong() or not member_A(T).member:
                continue
            blocks = _block_masks(T)
            for S in maximal_homogeneous_sets(T):
                assert mask_of(S) in blocks, (T.rows(), S)


@pytest.mark.slow
def test_prime_members_of_a_are_the_u_family():
    named = {3: family("U", 2), 5: family("U", 3), 7: family("U", 4)}
    for n in range(3, 8):
        primes = [T for T in enumerate_tournaments(n) if is_prime(T)]
        assert all(T.is_strong() for T in primes)
        in_a = [T for T in primes if member_A(T).member]
        if n in named:
            assert len(in_a) == 1
            assert is_isomorphic(in_a[0], named[n])
        else:
            assert in_a == []


@pytest.mark.slow
def test_d_members_are_heroes_unless_they_contain_d3():
    D3 = family("D", 3)
    for n in range(1, 8):
        for T in enumerate_tournaments(n):
            if not member_D(T).member:
                continue
            assert is_hero(T).is_hero == (contains_subtournament(T, D3) is None), T.rows()


def test_d_membership_is_unchanged_against_the_next_member():
    for n in range(1, 5):
        host, bigger = family("D", n), family("D", n + 1)
        for T in enumerate_tournaments(n):
            assert (contains_subtournament(host, T) is not None) == (contains_subtournament(bigger, T) is not None)
            assert member_D(T).member == (contains_subtournament(bigger, T) is not None)
