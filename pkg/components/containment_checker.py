"""
Subtournament containment, hero recognition, jewels and chromatic surveys.
"""

import itertools
import logging
from typing import Optional

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from components.chromatic_solver import can_extend, chromatic_number
from components.derivation import Derivation, relabel
from components.family_generator import minimal_nonheroes
from components.isomorphism import canonical_form, enumerate_tournaments, find_isomorphism
from components.tournament import Tournament, mask_of, members
from utils.errors import ConsistencyError, PreconditionError, SizeLimitError, UndecidedError
from utils.memo_cache import CanonicalMemo
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)


class Embedding(BaseModel):
    """Pattern vertex h is sent to host vertex map[h]."""

    model_config = ConfigDict(frozen=True)

    map: tuple[int, ...]

    def image(self):
        return tuple(sorted(self.map))


def is_embedding(T, H, embedding):
    """Whether embedding.map is an injective edge-preserving map from H into T."""
    image = embedding.map
    if len(image) != H.n or len(set(image)) != H.n:
        return False
    return all(T.beats(image[u], image[v]) for u, v in H.edges())


def _feasible_hosts(T, H):
    """Host vertices whose degrees and triangle counts can accommodate each pattern vertex."""
    host = [(T.out_mask(x).bit_count(), T.n - 1 - T.out_mask(x).bit_count(), T.cyclic_triangles_at(x)) for x in range(T.n)]
    feasible = []
    for h in range(H.n):
        out_h = H.out_mask(h).bit_count()
        need = (out_h, H.n - 1 - out_h, H.cyclic_triangles_at(h))
        feasible.append(mask_of(x for x in range(T.n) if all(have >= want for have, want in zip(host[x], need))))
    return feasible


def iter_embeddings(T, H, node_limit=None):
    """
    Every embedding of H into T.

    Each step extends the partial map at the pattern vertex with the fewest
    remaining host candidates and backtracks when any pattern vertex has none.

    Args:
        T (Tournament): Host
        H (Tournament): Pattern
        node_limit (int, optional): Search node budget, default HEROIX_EMBED_NODE_LIMIT

    Yields:
        Embedding: Each embedding once, in lexicographic order of choices

    Raises:
        UndecidedError: If the budget runs out
    """
    if node_limit is None:
        node_limit = get_settings().embed_node_limit
    if H.n > T.n:
        return
    if H.n == 0:
        yield Embedding(map=())
        return
    feasible = _feasible_hosts(T, H)
    if not all(feasible):
        return
    image = [-1] * H.n
    nodes = 0

    def candidates(h, used):
        mask = feasible[h] & ~used
        for p in range(H.n):
            x = image[p]
            if x < 0:
                continue
            mask &= T.out_mask(x) if H.beats(p, h) else T.in_mask(x)
        return mask

    def search(used, placed):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise UndecidedError(f"containment search exceeded {node_limit} nodes")
        if placed == H.n:
            yield Embedding(map=tuple(image))
            return
        best, best_mask = -1, 0
        for h in range(H.n):
            if image[h] >= 0:
                continue
            mask = candidates(h, used)
            if not mask:
                return
            if best < 0 or mask.bit_count() < best_mask.bit_count():
                best, best_mask = h, mask
        for x in members(best_mask):
            image[best] = x
            yield from search(used | 1 << x, placed + 1)
            image[best] = -1

    yield from search(0, 0)


def contains_subtournament(T, H, node_limit=None):
    """
    An embedding of H into T, or None when T is H-free.

    Args:
        T (Tournament): Host
        H (Tournament): Pattern
        node_limit (int, optional): Search node budget

    Returns:
        Embedding or None: A witness embedding

    Raises:
        UndecidedError: If the budget runs out
    """
    if H.n > T.n:
        return None
    if H.n == T.n and T.n <= get_settings().canonical_max_n:
        mapping = find_isomorphism(H, T)
        return None if mapping is None else Embedding(map=mapping)
    return next(iter_embeddings(T, H, node_limit), None)


def is_family_free(T, Hs):
    """True iff T contains none of the tournaments in Hs."""
    return all(contains_subtournament(T, H) is None for H in Hs)


def stearns_chain(T, mask=None):
    """
    Greedy transitive set: repeatedly keep the vertex of largest score and
    restrict to its out-neighbourhood. Reaches size floor(log2 n) + 1.

    Returns:
        tuple: Vertices from source to sink
    """
    residual = T.vertex_mask if mask is None else mask
    chain = []
    while residual:
        best = max(members(residual), key=lambda v: ((T.out_mask(v) & residual).bit_count(), -v))
        chain.append(best)
        residual &= T.out_mask(best)
    return tuple(chain)


def find_transitive_subset(T, k):
    """
    A transitive vertex set of size k.

    Every tournament on at least 2^(k-1) vertices has one, and the greedy
    chain alone finds it there; smaller tournaments fall back to an exact
    search.

    Args:
        T (Tournament): Tournament
        k (int): Required size

    Returns:
        tuple or None: Sorted vertices, or None if no such set exists
    """
    if k <= 0:
        return ()
    if k > T.n:
        return None
    chain = stearns_chain(T)
    if len(chain) >= k:
        return tuple(sorted(chain[:k]))

    def grow(chosen, size, start):
        if size == k:
            return chosen
        for v in range(start, T.n):
            if T.n - v < k - size:
                break
            if can_extend(T, chosen, v):
                found = grow(chosen | 1 << v, size + 1, v + 1)
                if found is not None:
                    return found
        return None

    found = grow(0, 0, 0)
    return None if found is None else members(found)


class HeroCertificate(BaseModel):
    """Outcome of hero recognition with its evidence."""

    model_config = ConfigDict(frozen=True)

    is_hero: bool
    obstruction: Optional[str] = None
    embedding: Optional[Embedding] = None
    derivation: Derivation


class HeroRecognizer:
    """
    Decides hero-ness in two independent ways and insists they agree.

    The forbidden-subtournament test looks for any of the five minimal
    non-heroes. The structural test accepts a tournament iff every strong
    component is a singleton or splits as Δ(I, H1, H2) with H1, H2 heroes and
    one of them transitive.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(HeroRecognizer, cls).__new__(cls)
            cls._instance._initialize()
        return cls._instance

    def _initialize(self):
        """Set up the forbidden list and the verdict memo."""
        self.forbidden = minimal_nonheroes()
        self._memo = CanonicalMemo("hero")

    def find_obstruction(self, H):
        """
        First minimal non-hero contained in H.

        Returns:
            tuple: (name, Embedding) or (None, None)
        """
        for name, pattern in self.forbidden.items():
            embedding = contains_subtournament(H, pattern)
            if embedding is not None:
                return name, embedding
        return None, None

    def _code(self, T):
        if T.n <= get_settings().canonical_max_n:
            return canonical_form(T)
        return None

    def structural_verdict(self, T):
        """Structural characterization, memoized on canonical codes."""
        code = self._code(T)
        if code is not None and code in self._memo:
            return self._memo.get(code)
        if T.n <= 1 or T.is_transitive():
            verdict = True
        else:
            components = T.strong_components()
            if len(components) > 1:
                verdict = all(self.structural_verdict(T.induced(c)) for c in components)
            else:
                verdict = self._find_split(T) is not None
        if code is not None:
            self._memo.put(code, verdict)
        return verdict

    def _find_split(self, T):
        for x, Y, Z in T.apex_splits():
            TY, TZ = T.induced(Y), T.induced(Z)
            if not (TY.is_transitive() or TZ.is_transitive()):
                continue
            if self.structural_verdict(TY) and self.structural_verdict(TZ):
                return x, Y, Z
        return None

    def structural_derivation(self, T):
        """Derivation tree explaining the structural verdict, in T's labels."""
        everything = tuple(range(T.n))
        if T.n <= 1:
            return Derivation(rule="singleton", vertices=everything)
        if T.is_transitive():
            return Derivation(rule="transitive", vertices=T.transitive_order())
        components = T.strong_components()
        if len(components) > 1:
            children = [relabel(self.structural_derivation(T.induced(c)), c) for c in components]
            return Derivation(rule="components", vertices=everything, children=children)
        split = self._find_split(T)
        if split is None:
            return Derivation(rule="no-apex-split", vertices=everything, detail="strong, no Δ(I, hero, hero) split with a transitive side")
        x, Y, Z = split
        return Derivation(
            rule="apex",
            vertices=everything,
            detail=f"apex {x}",
            children=[
                Derivation(rule="singleton", vertices=(x,)),
                relabel(self.structural_derivation(T.induced(Y)), Y),
                relabel(self.structural_derivation(T.induced(Z)), Z),
            ],
        )

    def is_hero(self, H):
        """
        Hero verdict from both characterizations.

        Args:
            H (Tournament): Nonempty tournament

        Returns:
            HeroCertificate: Verdict, obstruction (if any) and derivation

        Raises:
            PreconditionError: If H is empty
            ConsistencyError: If the two characterizations disagree
        """
        if H.n == 0:
            raise PreconditionError("hero recognition needs a nonempty tournament")
        name, embedding = self.find_obstruction(H)
        structural = self.structural_verdict(H)
        if structural != (name is None):
            raise ConsistencyError(
                f"hero characterizations disagree: structural={structural}, obstruction={name}"
            )
        return HeroCertificate(
            is_hero=structural,
            obstruction=name,
            embedding=embedding,
            derivation=self.structural_derivation(H),
        )


def is_hero(H):
    """Shortcut for HeroRecognizer().is_hero(H)."""
    return HeroRecognizer().is_hero(H)


def is_minimal_nonhero(H):
    """True iff H is not a hero but every one-vertex deletion is."""
    if H.n == 0:
        raise PreconditionError("minimal non-hero test needs a nonempty tournament")
    recognizer = HeroRecognizer()
    if recognizer.is_hero(H).is_hero:
        return False
    return all(recognizer.is_hero(H.induced([u for u in range(H.n) if u != v])).is_hero for v in range(H.n))


class JewelSpec(BaseModel):
    """Parameters (a, G, H) of a jewel."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: int = Field(ge=1)
    G: Tournament
    H: Tournament


def _side_contains(T, mask, pattern):
    if pattern.n == 0:
        return True
    if pattern.n == 1:
        return mask != 0
    if pattern.n == 3 and not pattern.is_transitive():
        return not T.is_transitive_mask(mask)
    if mask.bit_count() < pattern.n:
        return False
    return contains_subtournament(T.induced_mask(mask), pattern) is not None


def is_jewel(T, spec):
    """
    Whether every bipartition (A, B) of V(T) has G in T|A or H in T|B.

    Args:
        T (Tournament): Tournament with spec.a vertices
        spec (JewelSpec): Jewel parameters

    Returns:
        bool: True iff T is an (a, G, H)-jewel

    Raises:
        PreconditionError: If |V(T)| differs from spec.a
        SizeLimitError: If spec.a exceeds HEROIX_JEWEL_MAX_A
    """
    limit = get_settings().jewel_max_a
    if spec.a > limit:
        raise SizeLimitError(f"jewel size limited to {limit}, got {spec.a}")
    if T.n != spec.a:
        raise PreconditionError(f"jewel needs {spec.a} vertices, tournament has {T.n}")
    full = T.vertex_mask
    for a_mask in range(full + 1):
        if _side_contains(T, a_mask, spec.G):
            continue
        if not _side_contains(T, full & ~a_mask, spec.H):
            return False
    return True


def find_jewel_chain(T, spec, length, node_limit=None):
    """
    Disjoint jewel-inducing sets J_1, ..., J_length with J_i complete to J_j for i < j.

    Args:
        T (Tournament): Host
        spec (JewelSpec): Jewel parameters
        length (int): Chain length, at least 1
        node_limit (int, optional): Budget on candidate sets plus search nodes

    Returns:
        list or None: Sorted vertex tuples in chain order, or None

    Raises:
        UndecidedError: If the budget runs out
    """
    if length < 1:
        raise PreconditionError(f"chain length must be at least 1, got {length}")
    if node_limit is None:
        node_limit = get_settings().search_node_limit
    if spec.a * length > T.n:
        return None
    budget = [node_limit]

    def spend():
        budget[0] -= 1
        if budget[0] < 0:
            raise UndecidedError(f"jewel chain search exceeded {node_limit} nodes")

    candidates = []
    for subset in itertools.combinations(range(T.n), spec.a):
        spend()
        if is_jewel(T.induced(subset), spec):
            candidates.append(mask_of(subset))
    logger.debug("%d jewel candidates of size %d", len(candidates), spec.a)

    def dominated(mask):
        common = T.vertex_mask
        for v in members(mask):
            common &= T.out_mask(v)
        return common

    beaten = {c: dominated(c) for c in candidates}

    def search(chain, allowed):
        spend()
        if len(chain) == length:
            return chain
        for c in candidates:
            if c & allowed == c:
                found = search(chain + [c], allowed & beaten[c])
                if found is not None:
                    return found
        return None

    found = search([], T.vertex_mask)
    return None if found is None else [members(c) for c in found]


def survey_max_chromatic(Hs, max_n):
    """
    Largest chromatic number among Hs-free tournaments of each order.

    Args:
        Hs (list of Tournament): Forbidden tournaments
        max_n (int): Largest vertex count to survey

    Returns:
        pandas.DataFrame: Columns n, count, max_chi, witness; one row per
        n = 1..max_n, witness in row-string form, max_chi missing when no
        tournament of that order is Hs-free
    """
    limit = get_settings().max_n
    if max_n > limit:
        raise SizeLimitError(f"survey limited to {limit} vertices, got {max_n}")
    records = []
    for n in range(1, max_n + 1):
        count, best, witness = 0, None, None
        for T in enumerate_tournaments(n):
            if not is_family_free(T, Hs):
                continue
            count += 1
            chi, _ = chromatic_number(T)
            if best is None or chi > best:
                best, witness = chi, T
        records.append({
            "n": n,
            "count": count,
            "max_chi": best,
            "witness": "/".join(witness.rows()) if witness is not None else "",
        })
        logger.info("✓ Surveyed n=%d: %d free classes, max χ %s", n, count, best)
    frame = pd.DataFrame.from_records(records, columns=["n", "count", "max_chi", "witness"])
    frame["max_chi"] = frame["max_chi"].astype("Int64")
    return frame
