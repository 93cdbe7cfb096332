"""
Canonical codes, isomorphism tests and isomorph-free enumeration.

The canonical code of a tournament is the smallest upper-triangle bit string
over all vertex orders reachable by individualization-refinement. The search
tree depends only on the isomorphism class, so equal codes mean isomorphic
tournaments and vice versa.
"""

import itertools
import logging
from functools import lru_cache, total_ordering

from pydantic import BaseModel, ConfigDict

from components.tournament import Tournament, mask_of
from utils.errors import SizeLimitError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)


@total_ordering
class CanonicalCode(BaseModel):
    """Isomorphism-class fingerprint, ordered by (n, bits)."""

    model_config = ConfigDict(frozen=True)

    n: int
    bits: int

    def __lt__(self, other):
        if not isinstance(other, CanonicalCode):
            return NotImplemented
        return (self.n, self.bits) < (other.n, other.bits)

    def __str__(self):
        return f"{self.n}:{self.bits:x}"


def _refine(T, cells):
    """Split cells by out-neighbour counts into every cell until stable."""
    while True:
        masks = [mask_of(cell) for cell in cells]
        refined = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            signature = {v: tuple((T.out_mask(v) & m).bit_count() for m in masks) for v in cell}
            keys = sorted(set(signature.values()))
            if len(keys) == 1:
                refined.append(cell)
                continue
            changed = True
            for key in keys:
                refined.append(tuple(v for v in cell if signature[v] == key))
        cells = refined
        if not changed:
            return cells


def _code_bits(T, order):
    bits = 0
    for i, u in enumerate(order):
        row = T.out_mask(u)
        for v in order[i + 1:]:
            bits = bits << 1 | (row >> v & 1)
    return bits


def _leaves(T):
    """Every discrete ordered partition of the individualization-refinement tree."""
    scores = T.scores()
    initial = [tuple(v for v in range(T.n) if scores[v] == s) for s in sorted(set(scores))]
    stack = [initial]
    while stack:
        cells = _refine(T, stack.pop())
        target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            yield tuple(cell[0] for cell in cells)
            continue
        cell = cells[target]
        for v in reversed(cell):
            rest = tuple(u for u in cell if u != v)
            stack.append(cells[:target] + [(v,), rest] + cells[target + 1:])


def _check_size(T):
    limit = get_settings().canonical_max_n
    if T.n > limit:
        raise SizeLimitError(f"canonical form limited to {limit} vertices, got {T.n}")


def canonical_labeling(T):
    """
    Vertex order realising the canonical code.

    Args:
        T (Tournament): Input tournament

    Returns:
        tuple: order such that T.induced(order) is the canonical representative

    Raises:
        SizeLimitError: If T is larger than HEROIX_CANONICAL_MAX_N
    """
    _check_size(T)
    if T.n == 0:
        return ()
    best_bits, best_order = None, None
    for order in _leaves(T):
        bits = _code_bits(T, order)
        if best_bits is None or bits < best_bits:
            best_bits, best_order = bits, order
    return best_order


def canonical_form(T):
    """
    Canonical code of T.

    Args:
        T (Tournament): Input tournament

    Returns:
        CanonicalCode: Equal for isomorphic inputs, distinct otherwise
    """
    order = canonical_labeling(T)
    return CanonicalCode(n=T.n, bits=_code_bits(T, order))


def canonical_representative(T):
    """The tournament T relabelled into canonical order."""
    return T.induced(canonical_labeling(T))


def is_isomorphic(T1, T2):
    if T1.n != T2.n:
        return False
    if sorted(T1.scores()) != sorted(T2.scores()):
        return False
    return canonical_form(T1) == canonical_form(T2)


def find_isomorphism(T1, T2):
    """
    An isomorphism from T1 onto T2.

    Returns:
        tuple or None: mapping with mapping[v] the image of T1's vertex v
    """
    if not is_isomorphic(T1, T2):
        return None
    order1 = canonical_labeling(T1)
    order2 = canonical_labeling(T2)
    mapping = [0] * T1.n
    for a, b in zip(order1, order2):
        mapping[a] = b
    return tuple(mapping)


def automorphism_count(T):
    """
    Size of the automorphism group of T.

    Every minimum-code leaf differs from the first by an automorphism, and the
    tree is invariant under automorphisms, so the count of distinct minimum
    leaves is the group order.
    """
    _check_size(T)
    if T.n == 0:
        return 1
    best_bits, best = None, set()
    for order in _leaves(T):
        bits = _code_bits(T, order)
        if best_bits is None or bits < best_bits:
            best_bits, best = bits, {order}
        elif bits == best_bits:
            best.add(order)
    return len(best)


def tournament_from_bits(n, bits):
    """
    Labelled tournament whose upper-triangle pairs follow a bit string.

    Pairs (i, j), i < j, are read in row-major order from the most
    significant bit; a set bit means i→j.
    """
    pairs = list(itertools.combinations(range(n), 2))
    out = [0] * n
    for k, (i, j) in enumerate(pairs):
        if bits >> (len(pairs) - 1 - k) & 1:
            out[i] |= 1 << j
        else:
            out[j] |= 1 << i
    return Tournament(out)


def enumerate_labeled(n):
    """
    Every labelled tournament on n vertices.

    Brute-force oracle for the isomorph-free enumeration; 2^(n(n-1)/2) items.

    Yields:
        Tournament: Each labelled tournament once
    """
    if n > 7:
        raise SizeLimitError(f"labelled enumeration limited to 7 vertices, got {n}")
    total = n * (n - 1) // 2
    for bits in range(1 << total):
        yield tournament_from_bits(n, bits)


def _extend(T, mask):
    """Add vertex n to T; existing vertex v beats it iff bit v of mask is set."""
    n = T.n
    new = 1 << n
    out = [T.out_mask(v) | (new if mask >> v & 1 else 0) for v in range(n)]
    out.append(((1 << n) - 1) & ~mask)
    return Tournament(out)


@lru_cache(maxsize=None)
def _enumerate(n):
    if n <= 1:
        return (Tournament([0] * n),)
    classes = {}
    for parent in _enumerate(n - 1):
        for mask in range(1 << (n - 1)):
            child = _extend(parent, mask)
            order = canonical_labeling(child)
            code = CanonicalCode(n=n, bits=_code_bits(child, order))
            if code not in classes:
                classes[code] = child.induced(order)
    logger.info("✓ Enumerated %d classes on %d vertices", len(classes), n)
    return tuple(classes[code] for code in sorted(classes))


def enumerate_tournaments(n):
    """
    One canonical representative per isomorphism class on n vertices.

    Every class on n vertices arises by adding a vertex to some class on n-1
    vertices, so extending each representative in all 2^(n-1) ways and keeping
    one tournament per canonical code reaches every class exactly once.

    Args:
        n (int): Number of vertices

    Returns:
        list: Tournaments sorted by canonical code

    Raises:
        SizeLimitError: If n exceeds HEROIX_MAX_N
    """
    limit = get_settings().max_n
    if n < 0 or n > limit:
        raise SizeLimitError(f"enumeration limited to 0..{limit} vertices, got {n}")
    return list(_enumerate(n))
