"""
Homogeneous sets, substitution decomposition, Δ-partitions and the
membership deciders for the closures of {D_n}, {A_n} and their
intersection with the forest tournaments.
"""

from __future__ import annotations

import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from components.chromatic_solver import can_extend
from components.containment_checker import iter_embeddings
from components.derivation import Derivation, relabel
from components.family_generator import family
from components.isomorphism import canonical_form, is_isomorphic
from components.tournament import Tournament, mask_of, members, substitute
from utils.errors import PreconditionError
from utils.memo_cache import CanonicalMemo
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)


def _mask_arg(T, S):
    if isinstance(S, int):
        return S
    vertices = list(S)
    for v in vertices:
        if not 0 <= v < T.n:
            raise PreconditionError(f"vertex {v} out of range for n={T.n}")
    return mask_of(vertices)


def _mixed_outside(T, mask):
    """Vertices outside mask with both an out- and an in-neighbour inside it."""
    mixed = 0
    for v in members(T.vertex_mask & ~mask):
        inside = T.out_mask(v) & mask
        if inside and inside != mask:
            mixed |= 1 << v
    return mixed


def is_homogeneous(T, S):
    """
    Whether no vertex outside S is mixed on S.

    Args:
        T (Tournament): Tournament
        S (iterable of int or int bitmask): Vertex set with 1 < |S| < n

    Returns:
        bool: True iff S is homogeneous

    Raises:
        PreconditionError: If |S| is outside the open range (1, n)
    """
    mask = _mask_arg(T, S)
    size = mask.bit_count()
    if not 1 < size < T.n:
        raise PreconditionError(f"homogeneous sets need 1 < |S| < {T.n}, got |S| = {size}")
    return _mixed_outside(T, mask) == 0


def homogeneous_closure(T, S):
    """
    Smallest set containing S on which no outside vertex is mixed.

    Returns:
        int: Bitmask of the closure (possibly every vertex)
    """
    mask = _mask_arg(T, S)
    while True:
        mixed = _mixed_outside(T, mask)
        if not mixed:
            return mask
        mask |= mixed


def _pair_closures(T):
    closures = set()
    for u in range(T.n):
        for v in range(u + 1, T.n):
            closure = homogeneous_closure(T, (1 << u) | (1 << v))
            if closure != T.vertex_mask:
                closures.add(closure)
    return closures


def maximal_homogeneous_sets(T):
    """
    Every inclusion-maximal homogeneous set.

    Each homogeneous set is the closure of two of its vertices, so the
    maximal ones are the maximal proper pair closures.

    Args:
        T (Tournament): Tournament with at least three vertices

    Returns:
        list of tuple: Sorted vertex tuples in lexicographic order
    """
    if T.n < 3:
        raise PreconditionError(f"maximal homogeneous sets need n >= 3, got {T.n}")
    closures = _pair_closures(T)
    maximal = [c for c in closures if not any(c != d and c & d == c for d in closures)]
    return sorted(members(c) for c in maximal)


def is_prime(T):
    """True iff T has no homogeneous set; tournaments on at most two vertices are prime."""
    if T.n <= 2:
        return True
    return not _pair_closures(T)


class DecompositionTree(BaseModel):
    """
    Substitution decomposition node.

    vertices are in the labels of the decomposed tournament. Linear nodes
    list the strong components in chain order; prime nodes list the maximal
    homogeneous sets and the remaining singletons ordered by least vertex,
    and quotient is induced on each child's least vertex in child order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["leaf", "linear", "prime"]
    vertices: tuple[int, ...]
    children: list[DecompositionTree] = Field(default_factory=list)
    quotient: Optional[Tournament] = None

    def render(self, indent=0):
        label = " ".join(str(v) for v in self.vertices)
        lines = [f"{'  ' * indent}{self.kind} [{label}]"]
        for child in self.children:
            lines.extend(child.render(indent + 1))
        return lines


def substitution_decomposition(T, labels=None):
    """
    Decompose T into leaves, linear chains and prime substitutions.

    Args:
        T (Tournament): Nonempty tournament
        labels (sequence of int, optional): Outer label of each vertex of T

    Returns:
        DecompositionTree: Root node covering every vertex
    """
    if T.n == 0:
        raise PreconditionError("decomposition needs a nonempty tournament")
    if labels is None:
        labels = tuple(range(T.n))
    if T.n == 1:
        return DecompositionTree(kind="leaf", vertices=(labels[0],))
    components = T.strong_components()
    if len(components) > 1:
        parts = components
        kind = "linear"
    else:
        modules = [mask_of(m) for m in maximal_homogeneous_sets(T)]
        covered = 0
        for m in modules:
            covered |= m
        parts = [members(m) for m in modules] + [(v,) for v in members(T.vertex_mask & ~covered)]
        parts.sort(key=lambda part: part[0])
        kind = "prime"
    children = [substitution_decomposition(T.induced(part), [labels[v] for v in part]) for part in parts]
    quotient = T.induced([part[0] for part in parts])
    return DecompositionTree(
        kind=kind,
        vertices=tuple(sorted(labels)),
        children=children,
        quotient=quotient,
    )


def recompose(tree):
    """
    Rebuild a tournament from its decomposition by repeated substitution.

    Returns:
        tuple: (Tournament, labels) where vertex i of the result is labels[i]
    """
    if tree.kind == "leaf":
        return Tournament([0]), tree.vertices
    rebuilt = [recompose(child) for child in tree.children]
    result = tree.quotient
    for position in range(len(rebuilt) - 1, -1, -1):
        result = substitute(result, position, rebuilt[position][0])
    labels = tuple(v for _, child_labels in rebuilt for v in child_labels)
    return result, labels


def find_trisection(T):
    """
    A partition (X, Y, Z) with X ⇒ Y, Y ⇒ Z and Z ⇒ X.

    The parts of a trisection are exactly the children of a prime node whose
    quotient is a cyclic triangle, so it is unique up to rotation; X is the
    part containing vertex 0.

    Returns:
        tuple or None: (X, Y, Z) as sorted vertex tuples
    """
    if T.n < 3:
        raise PreconditionError(f"trisection needs n >= 3, got {T.n}")
    if not T.is_strong():
        return None
    tree = substitution_decomposition(T)
    if len(tree.children) != 3:
        return None
    parts = [child.vertices for child in tree.children]
    x_part = parts[0]
    y_part = next(p for p in parts[1:] if T.beats(x_part[0], p[0]))
    z_part = next(p for p in parts[1:] if p is not y_part)
    return x_part, y_part, z_part


class DeltaPartitionSpine(BaseModel):
    """({v_1}, X_1, {v_2}, ..., X_{k-1}, {v_k}) with v_j → v_i for i < j."""

    model_config = ConfigDict(frozen=True)

    spine: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def sequence(self):
        """Interleaved block list, singletons at odd 1-based positions."""
        result = []
        for i, v in enumerate(self.spine):
            result.append((v,))
            if i < len(self.blocks):
                result.append(self.blocks[i])
        return result


def _transitive_subsets(T, min_size):
    found = []

    def grow(chosen, start):
        if chosen.bit_count() >= min_size:
            found.append(chosen)
        for v in range(start, T.n):
            if can_extend(T, chosen, v):
                grow(chosen | 1 << v, v + 1)

    grow(0, 0)
    found.sort(key=lambda m: (-m.bit_count(), members(m)))
    return found


def iter_spine_partitions(T, allow_empty=False):
    """
    Spine-form Δ-partitions of T, longest spine first.

    A vertex x belongs to block X_j iff its in-neighbours on the spine are
    exactly v_1..v_j with 1 <= j <= k-1; blocks must also run forward.

    Args:
        T (Tournament): Tournament
        allow_empty (bool): Accept empty X blocks

    Yields:
        tuple: (spine tuple, list of block bitmasks)
    """
    for spine_mask in _transitive_subsets(T, 2):
        spine = tuple(sorted(members(spine_mask), key=lambda v: (T.out_mask(v) & spine_mask).bit_count()))
        k = len(spine)
        prefix = [0] * (k + 1)
        for i, v in enumerate(spine):
            prefix[i + 1] = prefix[i] | 1 << v
        blocks = [0] * (k - 1)
        valid = True
        for x in members(T.vertex_mask & ~spine_mask):
            beaten_by = T.in_mask(x) & spine_mask
            j = beaten_by.bit_count()
            if j == 0 or j == k or beaten_by != prefix[j]:
                valid = False
                break
            blocks[j - 1] |= 1 << x
        if not valid or (not allow_empty and not all(blocks)):
            continue
        later = 0
        for i in range(k - 2, -1, -1):
            if any(T.out_mask(u) & later != later for u in members(blocks[i])):
                valid = False
                break
            later |= blocks[i]
        if valid:
            yield spine, blocks


def find_spine_delta_partition(T):
    """
    Δ-partition with singleton odd blocks and nonempty even blocks, longest spine first.

    Args:
        T (Tournament): Strongly connected tournament with n >= 3

    Returns:
        DeltaPartitionSpine or None
    """
    if T.n < 3 or not T.is_strong():
        raise PreconditionError("spine Δ-partition needs a strongly connected tournament with n >= 3")
    for spine, blocks in iter_spine_partitions(T):
        return DeltaPartitionSpine(spine=spine, blocks=tuple(members(b) for b in blocks))
    return None


class MembershipResult(BaseModel):
    """Verdict of a class-membership decider."""

    model_config = ConfigDict(frozen=True)

    member: bool
    derivation: Derivation
    case: Optional[int] = None


class ClassMembership:
    """
    Membership deciders for the closure classes, memoized per isomorphism class.

    member_D: T belongs iff it is a single vertex, or every strong component
    belongs, or T is strong and splits as Δ(I, T|Y, T|Z) with both parts
    members.

    member_A: T belongs iff it is a single vertex, or every strong component
    belongs, or T is strong and has a spine Δ-partition (empty even blocks
    allowed) whose even blocks all belong.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ClassMembership, cls).__new__(cls)
            cls._instance._initialize()
        return cls._instance

    def _initialize(self):
        """Set up the memo tables and the prime templates."""
        self._memo_d = CanonicalMemo("member_D")
        self._memo_a = CanonicalMemo("member_A")
        self._memo_af = CanonicalMemo("member_AF")
        self._templates = {3: family("U", 2), 5: family("U", 3), 7: family("U", 4)}

    @staticmethod
    def _code(T):
        if T.n <= get_settings().canonical_max_n:
            return canonical_form(T)
        return None

    def _memoized(self, memo, T, compute):
        code = self._code(T)
        if code is not None and code in memo:
            return memo.get(code)
        value = compute(T)
        if code is not None:
            memo.put(code, value)
        return value

    # D

    def _in_d(self, T):
        return self._memoized(self._memo_d, T, self._compute_d)

    def _compute_d(self, T):
        if T.n == 1:
            return True
        components = T.strong_components()
        if len(components) > 1:
            return all(self._in_d(T.induced(c)) for c in components)
        return self._d_split(T) is not None

    def _d_split(self, T):
        for x, Y, Z in T.apex_splits():
            if self._in_d(T.induced(Y)) and self._in_d(T.induced(Z)):
                return x, Y, Z
        return None

    def _d_derivation(self, T):
        everything = tuple(range(T.n))
        if T.n == 1:
            return Derivation(rule="singleton", vertices=everything)
        components = T.strong_components()
        if len(components) > 1:
            children = [relabel(self._d_derivation(T.induced(c)), c) for c in components]
            return Derivation(rule="components", vertices=everything, children=children)
        split = self._d_split(T)
        if split is None:
            return Derivation(rule="rejected", vertices=everything, detail="strong, no apex split into two members")
        x, Y, Z = split
        return Derivation(
            rule="apex",
            vertices=everything,
            detail=f"apex {x}",
            children=[
                Derivation(rule="singleton", vertices=(x,)),
                relabel(self._d_derivation(T.induced(Y)), Y),
                relabel(self._d_derivation(T.induced(Z)), Z),
            ],
        )

    def member_D(self, T):
        if T.n == 0:
            raise PreconditionError("membership needs a nonempty tournament")
        verdict = self._in_d(T)
        return MembershipResult(member=verdict, derivation=self._d_derivation(T))

    # A

    def _in_a(self, T):
        return self._memoized(self._memo_a, T, self._compute_a)

    def _compute_a(self, T):
        if T.n == 1:
            return True
        components = T.strong_components()
        if len(components) > 1:
            return all(self._in_a(T.induced(c)) for c in components)
        return self._a_partition(T) is not None

    def _a_partition(self, T):
        for spine, blocks in iter_spine_partitions(T, allow_empty=True):
            if all(self._in_a(T.induced_mask(b)) for b in blocks if b):
                return spine, blocks
        return None

    def _a_derivation(self, T):
        everything = tuple(range(T.n))
        if T.n == 1:
            return Derivation(rule="singleton", vertices=everything)
        components = T.strong_components()
        if len(components) > 1:
            children = [relabel(self._a_derivation(T.induced(c)), c) for c in components]
            return Derivation(rule="components", vertices=everything, children=children)
        found = self._a_partition(T)
        if found is None:
            return Derivation(rule="rejected", vertices=everything, detail="strong, no spine Δ-partition into members")
        spine, blocks = found
        children = []
        for i, v in enumerate(spine):
            children.append(Derivation(rule="singleton", vertices=(v,)))
            if i < len(blocks) and blocks[i]:
                block = members(blocks[i])
                children.append(relabel(self._a_derivation(T.induced(block)), block))
        return Derivation(rule="spine", vertices=everything, detail=f"spine {' '.join(map(str, spine))}", children=children)

    def member_A(self, T):
        if T.n == 0:
            raise PreconditionError("membership needs a nonempty tournament")
        verdict = self._in_a(T)
        return MembershipResult(member=verdict, derivation=self._a_derivation(T))

    # AF

    def _af_case(self, T):
        return self._memoized(self._memo_af, T, self._compute_af)

    def _compute_af(self, T):
        if T.n == 1:
            return 1
        tree = substitution_decomposition(T)
        children = [T.induced(child.vertices) for child in tree.children]
        if tree.kind == "linear":
            return 2 if all(self._af_case(child) for child in children) else None
        template = self._templates.get(len(children))
        if template is None or not is_isomorphic(template, tree.quotient):
            return None
        for embedding in iter_embeddings(tree.quotient, template):
            blocks = [children[q] for q in embedding.map]
            case = self._match_template(blocks)
            if case is not None:
                return case
        return None

    def _match_template(self, blocks):
        """Case number for blocks laid out in Δ order, or None."""
        single = [b.n == 1 for b in blocks]
        linear = [b.is_transitive() for b in blocks]

        def in_af(b):
            return self._af_case(b) is not None

        if len(blocks) == 3:
            g1, g2, g3 = blocks
            if single[0] and ((linear[1] and in_af(g3)) or (linear[2] and in_af(g2))):
                return 3
            return None
        if len(blocks) == 5:
            if all(linear) and single[1] and single[4]:
                return 4
            if all(linear) and single[0] and single[3]:
                return 4
            if single[0] and single[4] and linear[2] and linear[3] and in_af(blocks[1]):
                return 5
            if single[0] and single[4] and linear[1] and linear[2] and in_af(blocks[3]):
                return 5
            return None
        if all(linear) and single[0] and single[3] and single[6]:
            return 6
        return None

    def member_AF(self, T):
        """
        Membership in the intersection of the A-closure with the forest tournaments.

        Returns:
            MembershipResult: verdict, matched case 1..6 and the decomposition
            rendered as a derivation
        """
        if T.n == 0:
            raise PreconditionError("membership needs a nonempty tournament")
        case = self._af_case(T)
        tree = substitution_decomposition(T)
        derivation = _tree_derivation(tree)
        return MembershipResult(member=case is not None, derivation=derivation, case=case)


def _tree_derivation(tree):
    return Derivation(
        rule=tree.kind,
        vertices=tree.vertices,
        children=[_tree_derivation(child) for child in tree.children],
    )


def member_D(T):
    return ClassMembership().member_D(T)


def member_A(T):
    return ClassMembership().member_A(T)


def member_AF(T):
    return ClassMembership().member_AF(T)
