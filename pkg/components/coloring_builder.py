"""
Constructive colourings: explicit n-colourings of D_n and A_n, Liu forms of
prime U_3-free tournaments, and the 3^(n-2)-colouring of {D_n, U_3}-free
tournaments built over the substitution decomposition.
"""

import logging
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict

from components.chromatic_solver import Coloring, can_extend, is_valid_coloring
from components.containment_checker import Embedding, contains_subtournament
from components.family_generator import family
from components.isomorphism import find_isomorphism
from components.structure_analyzer import is_prime, substitution_decomposition
from components.tournament import delta_block_ranges, mask_of, members
from utils.errors import ConsistencyError, PreconditionError, UndecidedError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)

A_COLORING_MAX_N = 5


def explicit_coloring_D(n):
    """
    The n-colouring of D_n: the apex takes a fresh colour and both copies of
    D_(n-1) reuse the same (n-1)-colouring.

    Args:
        n (int): Family parameter, 1 <= n <= HEROIX D cap

    Returns:
        Coloring: Colouring of family("D", n) with exactly n colours
    """
    cap = get_settings().d_max_n
    if not 1 <= n <= cap:
        raise PreconditionError(f"explicit D_n colouring needs 1 <= n <= {cap}, got {n}")

    def colors(k):
        if k == 1:
            return [0]
        inner = colors(k - 1)
        return [k - 1] + inner + inner

    return Coloring(assign=tuple(colors(n)))


def explicit_coloring_A(n):
    """
    The n-colouring of A_n: every singleton block of the Δ-partition takes
    the fresh colour, every copy of A_(n-1) reuses the same colouring.
    """
    if not 1 <= n <= A_COLORING_MAX_N:
        raise PreconditionError(f"explicit A_n colouring needs 1 <= n <= {A_COLORING_MAX_N}, got {n}")

    def colors(k):
        if k == 1:
            return [0]
        inner = colors(k - 1)
        sizes = [1]
        for _ in range(k - 1):
            sizes += [len(inner), 1]
        assign = []
        for position, block in enumerate(delta_block_ranges(sizes)):
            assign += [k - 1] * len(block) if position % 2 == 0 else inner
        return assign

    return Coloring(assign=tuple(colors(n)))


class LiuForm(BaseModel):
    """
    Shape of a prime U_3-free tournament.

    Cyclic forms carry an embedding of S_m onto the tournament (iso.map[s] is
    the vertex at S_m position s); triple forms carry three parts whose
    pairwise unions are transitive.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["cyclic", "triple"]
    m: Optional[int] = None
    iso: Optional[Embedding] = None
    parts: Optional[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = None

    def describe(self):
        if self.kind == "cyclic":
            return f"cyclic({self.m})"
        return "triple(" + ", ".join("{" + ",".join(str(v) for v in part) + "}" for part in self.parts) + ")"


def _triple_partition(T, node_limit):
    """First (X1, X2, X3) in vertex order with pairwise transitive unions."""
    parts = [0, 0, 0]
    nodes = 0

    def search(v, used):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise UndecidedError(f"Liu form search exceeded {node_limit} nodes")
        if v == T.n:
            return True
        for p in range(min(used + 1, 3)):
            others = [q for q in range(3) if q != p]
            if all(can_extend(T, parts[p] | parts[q], v) for q in others):
                parts[p] |= 1 << v
                if search(v + 1, max(used, p + 1)):
                    return True
                parts[p] &= ~(1 << v)
        return False

    if search(0, 0):
        return tuple(members(mask) for mask in parts)
    return None


def is_valid_liu_form(T, form):
    """Re-check a Liu form against T."""
    if form.kind == "cyclic":
        S = family("S", form.m)
        if form.iso is None or S.n != T.n or len(set(form.iso.map)) != T.n:
            return False
        return all(T.beats(form.iso.map[a], form.iso.map[b]) for a, b in S.edges())
    masks = [mask_of(part) for part in form.parts]
    if masks[0] | masks[1] | masks[2] != T.vertex_mask or sum(len(p) for p in form.parts) != T.n:
        return False
    return all(T.is_transitive_mask(masks[i] | masks[(i + 1) % 3]) for i in range(3))


def liu_form(T, node_limit=None):
    """
    Classify a prime U_3-free tournament as S_m or as a transitive-union triple.

    Args:
        T (Tournament): Prime, U_3-free tournament
        node_limit (int, optional): Triple search budget, default HEROIX_SEARCH_NODE_LIMIT

    Returns:
        LiuForm: Cyclic when T is isomorphic to S_m, otherwise a triple

    Raises:
        PreconditionError: If T is not prime or contains U_3
        UndecidedError: If the triple search runs out of budget
        ConsistencyError: If neither form exists
    """
    if T.n == 0:
        raise PreconditionError("Liu form needs a nonempty tournament")
    if not is_prime(T):
        raise PreconditionError("tournament is not prime")
    witness = contains_subtournament(T, family("U", 3))
    if witness is not None:
        raise PreconditionError("tournament contains U_3", witness=witness)
    if node_limit is None:
        node_limit = get_settings().search_node_limit
    if T.n % 2 == 1:
        m = (T.n + 1) // 2
        mapping = find_isomorphism(family("S", m), T)
        if mapping is not None:
            return LiuForm(kind="cyclic", m=m, iso=Embedding(map=mapping))
    parts = _triple_partition(T, node_limit)
    if parts is None:
        raise ConsistencyError("prime U_3-free tournament has neither a cyclic nor a triple form")
    return LiuForm(kind="triple", parts=parts)


def liu_two_coloring(T, form):
    """
    Two transitive classes read off a Liu form.

    Cyclic: the first m positions of S_m against the remaining m-1.
    Triple: X1 ∪ X2 against X3.
    """
    assign = [0] * T.n
    if form.kind == "cyclic":
        for position, v in enumerate(form.iso.map):
            assign[v] = 0 if position < form.m else 1
    else:
        for v in form.parts[2]:
            assign[v] = 1
    return Coloring(assign=tuple(assign)).compacted()


class U3HeroColorer:
    """Recursive {D_n, U_3}-free colouring over the substitution decomposition."""

    def __init__(self, T):
        """
        Initialize the U3HeroColorer class.

        Args:
            T (Tournament): Tournament to colour
        """
        self.T = T
        self._d = {}

    def _contains_d(self, labels, k):
        sub = self.T.induced(sorted(labels))
        if k == 1:
            return sub.n > 0
        if k == 2:
            return not sub.is_transitive()
        if sub.n < (1 << k) - 1:
            return False
        key = (tuple(sorted(labels)), k)
        if key not in self._d:
            self._d[key] = contains_subtournament(sub, family("D", k)) is not None
        return self._d[key]

    def color(self, tree, n):
        """
        Colour vectors for the vertices under tree.

        Returns:
            dict: vertex -> tuple of n-2 digits in {0, 1, 2}
        """
        if n == 2 or tree.kind == "leaf":
            return {v: (0,) * (n - 2) for v in tree.vertices}
        if tree.kind == "prime" and all(child.kind == "leaf" for child in tree.children):
            return self._prime_base(tree, n)
        heavy = [self._contains_d(child.vertices, n - 1) for child in tree.children]
        if tree.kind == "linear":
            digits = [0] * len(tree.children)
        else:
            form = self._quotient_form(tree)
            if form.kind == "cyclic":
                digits = self._cyclic_digits(form, heavy, n)
            else:
                digits = [0] * len(tree.children)
                for index, part in enumerate(form.parts):
                    for q in part:
                        digits[q] = index
        result = {}
        for child, is_heavy, digit in zip(tree.children, heavy, digits):
            if is_heavy:
                result.update(self.color(child, n))
            else:
                for v, vector in self.color(child, n - 1).items():
                    result[v] = (digit,) + vector
        return result

    def _prime_base(self, tree, n):
        sub = self.T.induced(list(tree.vertices))
        try:
            form = liu_form(sub)
        except PreconditionError as e:
            raise ConsistencyError(f"prime factor rejected by Liu form: {e}")
        coloring = liu_two_coloring(sub, form)
        return {v: (coloring.assign[i],) + (0,) * (n - 3) for i, v in enumerate(tree.vertices)}

    def _quotient_form(self, tree):
        try:
            return liu_form(tree.quotient)
        except PreconditionError as e:
            raise ConsistencyError(f"quotient rejected by Liu form: {e}")

    def _cyclic_digits(self, form, heavy, n):
        """Digits per child after rotating S_m so the D_(n-1)-containing factor is last."""
        size = 2 * form.m - 1
        position_of = {q: s for s, q in enumerate(form.iso.map)}
        heavy_positions = [position_of[q] for q, flag in enumerate(heavy) if flag]
        if len(heavy_positions) > 1:
            witness = contains_subtournament(self.T, family("D", n))
            raise PreconditionError(f"two factors contain D_{n - 1}, so the tournament contains D_{n}", witness=witness)
        last = heavy_positions[0] if heavy_positions else size - 1
        digits = []
        for q in range(len(heavy)):
            rotated = (position_of[q] - last + size - 1) % size
            digits.append(0 if rotated < form.m - 1 else 1)
        return digits


def u3_hero_coloring(T, n):
    """
    Colouring with at most 3^(n-2) colours of a {D_n, U_3}-free tournament.

    Colour vectors in {0,1,2}^(n-2) are flattened base 3 and then renumbered
    by first occurrence.

    Args:
        T (Tournament): {D_n, U_3}-free tournament
        n (int): Parameter, at least 2

    Returns:
        Coloring: A valid colouring

    Raises:
        PreconditionError: If n < 2 or T contains D_n or U_3 (witness attached)
        ConsistencyError: If the built colouring is not valid
    """
    if n < 2:
        raise PreconditionError(f"u3_hero_coloring needs n >= 2, got {n}")
    if T.n == 0:
        return Coloring(assign=())
    for name, pattern in ((f"D_{n}", family("D", n)), ("U_3", family("U", 3))):
        witness = contains_subtournament(T, pattern)
        if witness is not None:
            raise PreconditionError(f"tournament contains {name}", witness=witness)
    vectors = U3HeroColorer(T).color(substitution_decomposition(T), n)
    flat = []
    for v in range(T.n):
        value = 0
        for digit in vectors[v]:
            value = value * 3 + digit
        flat.append(value)
    coloring = Coloring(assign=tuple(flat)).compacted()
    if not is_valid_coloring(T, coloring):
        raise ConsistencyError("U_3-hero colouring produced a monochromatic cyclic triangle")
    logger.debug("✓ %d colours for %d vertices at n=%d", coloring.k, T.n, n)
    return coloring
