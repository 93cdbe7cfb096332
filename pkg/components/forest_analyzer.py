"""
Backedge graphs, forest orderings and r-incomparable integer maps.
"""

import itertools
import logging
from functools import lru_cache

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator

from components.chromatic_solver import Coloring, chromatic_number
from components.tournament import Ordering
from utils.errors import PreconditionError, SizeLimitError, UndecidedError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)


class BackedgeGraph:
    """
    Undirected graph of the edges pointing backwards under an ordering.

    An edge {u, v} is present iff the later of u, v in the ordering beats the
    earlier one.
    """

    def __init__(self, T, ordering):
        """
        Initialize the BackedgeGraph class.

        Args:
            T (Tournament): Tournament
            ordering (Ordering): Vertex ordering of T
        """
        if len(ordering) != T.n:
            raise PreconditionError(f"ordering has {len(ordering)} vertices, tournament has {T.n}")
        self.T = T
        self.ordering = ordering
        self.position = ordering.positions
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(T.n))
        seq = ordering.seq
        for p, q in itertools.combinations(range(T.n), 2):
            if T.beats(seq[q], seq[p]):
                self.graph.add_edge(seq[p], seq[q])
        self._component = {}
        for index, component in enumerate(self.components()):
            for v in component:
                self._component[v] = index

    @property
    def edges(self):
        """Backward edges as sorted vertex pairs, in sorted order."""
        return sorted(tuple(sorted(e)) for e in self.graph.edges())

    def components(self):
        """Connected components (isolated vertices included), ordered by least vertex."""
        return sorted((tuple(sorted(c)) for c in nx.connected_components(self.graph)), key=lambda c: c[0])

    def component_of(self, v):
        return self._component[v]

    def crossing(self, i):
        """Backward edges with exactly one endpoint among the first i vertices of the ordering."""
        return [e for e in self.edges if (self.position[e[0]] < i) != (self.position[e[1]] < i)]

    def thickness(self):
        """
        Minimum number of crossing edges over the n-1 prefix cuts.

        Raises:
            PreconditionError: If the tournament has fewer than two vertices
        """
        if self.T.n < 2:
            raise PreconditionError("thickness needs at least two vertices")
        return min(len(self.crossing(i)) for i in range(1, self.T.n))

    def is_acyclic(self):
        return nx.is_forest(self.graph)


def backedge_graph(T, ordering):
    return BackedgeGraph(T, ordering)


def thickness(graph):
    return graph.thickness()


class _IntervalForest:
    """Forest-ordering decisions for every contiguous interval of one ordering."""

    def __init__(self, T, seq):
        self.T = T
        self.seq = tuple(seq)
        self.decide = lru_cache(maxsize=None)(self._decide)

    def _backedges(self, lo, hi):
        seq = self.seq
        return [(p, q) for p in range(lo, hi) for q in range(p + 1, hi) if self.T.beats(seq[q], seq[p])]

    def cut_is_valid(self, lo, hi, cut):
        """Crossing backedges of [lo, hi) at cut lie in distinct components of the interval's graph."""
        graph = nx.Graph()
        graph.add_nodes_from(range(lo, hi))
        edges = self._backedges(lo, hi)
        graph.add_edges_from(edges)
        component = {}
        for index, nodes in enumerate(nx.connected_components(graph)):
            for p in nodes:
                component[p] = index
        seen = set()
        for p, q in edges:
            if p < cut <= q:
                if component[p] in seen:
                    return False
                seen.add(component[p])
        return True

    def _decide(self, lo, hi):
        """Leftmost forest cut of [lo, hi), 0 for a single vertex, None if not a forest ordering."""
        if hi - lo <= 1:
            return 0
        for cut in range(lo + 1, hi):
            if self.cut_is_valid(lo, hi, cut) and self.decide(lo, cut) is not None and self.decide(cut, hi) is not None:
                return cut
        return None


def _as_ordering(T, ordering):
    if not isinstance(ordering, Ordering):
        ordering = Ordering(seq=tuple(ordering))
    if len(ordering) != T.n:
        raise PreconditionError(f"ordering has {len(ordering)} vertices, tournament has {T.n}")
    return ordering


def is_forest_ordering(T, ordering):
    """
    Whether ordering is a forest ordering of T.

    Some prefix cut must have its crossing backedges in pairwise distinct
    components of the backedge graph, with both sides forest orderings of
    their own subtournaments.

    Args:
        T (Tournament): Tournament
        ordering (Ordering or sequence of int): Vertex ordering

    Returns:
        bool: True iff it is a forest ordering
    """
    ordering = _as_ordering(T, ordering)
    return _IntervalForest(T, ordering.seq).decide(0, T.n) is not None


def find_forest_cut(T, ordering):
    """
    Leftmost forest cut of a forest ordering.

    Returns:
        int or None: Number of vertices left of the cut, or None if ordering
        is not a forest ordering (or T has a single vertex)
    """
    ordering = _as_ordering(T, ordering)
    if T.n <= 1:
        return None
    return _IntervalForest(T, ordering.seq).decide(0, T.n)


def valid_forest_cuts(T, ordering):
    """Every cut position at which the ordering splits into two forest orderings."""
    ordering = _as_ordering(T, ordering)
    intervals = _IntervalForest(T, ordering.seq)
    return [
        cut
        for cut in range(1, T.n)
        if intervals.cut_is_valid(0, T.n, cut) and intervals.decide(0, cut) is not None and intervals.decide(cut, T.n) is not None
    ]


def find_forest_ordering(T, node_limit=None):
    """
    Lexicographically least forest ordering of T.

    Tournaments with chromatic number at least three are rejected at once.
    Orderings are built left to right; a prefix is abandoned when its
    backedges contain a cycle or when it is not itself a forest ordering,
    since both properties pass to every prefix of a forest ordering.

    Args:
        T (Tournament): Tournament
        node_limit (int, optional): Search node budget, default HEROIX_SEARCH_NODE_LIMIT

    Returns:
        Ordering or None: A witness, or None if T is not a forest tournament

    Raises:
        SizeLimitError: If T exceeds HEROIX_FOREST_MAX_N vertices
        UndecidedError: If the node budget runs out
    """
    limit = get_settings().forest_max_n
    if T.n > limit:
        raise SizeLimitError(f"forest ordering search limited to {limit} vertices, got {T.n}")
    if node_limit is None:
        node_limit = get_settings().search_node_limit
    if T.n <= 1:
        return Ordering.identity(T.n)
    chi, _ = chromatic_number(T)
    if chi >= 3:
        logger.debug("✗ χ = %d rules out a forest ordering", chi)
        return None
    nodes = 0

    def creates_cycle(prefix, v):
        forest = nx.Graph()
        forest.add_nodes_from(prefix)
        forest.add_edges_from((u, w) for i, u in enumerate(prefix) for w in prefix[i + 1:] if T.beats(w, u))
        targets = [u for u in prefix if T.beats(v, u)]
        roots = {}
        for component_index, nodes_in in enumerate(nx.connected_components(forest)):
            for u in nodes_in:
                roots[u] = component_index
        hit = [roots[u] for u in targets]
        return len(hit) != len(set(hit))

    def search(prefix, remaining):
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise UndecidedError(f"forest ordering search exceeded {node_limit} nodes")
        if not remaining:
            return prefix
        for v in sorted(remaining):
            if creates_cycle(prefix, v):
                continue
            candidate = prefix + (v,)
            if len(candidate) > 2 and _IntervalForest(T.induced(sorted(candidate)), _local(candidate)).decide(0, len(candidate)) is None:
                continue
            found = search(candidate, remaining - {v})
            if found is not None:
                return found
        return None

    found = search((), frozenset(range(T.n)))
    if found is None:
        return None
    return Ordering(seq=found)


def _local(prefix):
    """Prefix re-expressed in the labels of T.induced(sorted(prefix))."""
    rank = {v: i for i, v in enumerate(sorted(prefix))}
    return [rank[v] for v in prefix]


def induced_ordering(T, ordering, S):
    """
    The subtournament on S with the sub-ordering of S.

    Returns:
        tuple: (T.induced(sorted(S)), Ordering in the induced labels)
    """
    kept = ordering.restrict(S)
    return T.induced(sorted(kept)), Ordering(seq=tuple(_local(kept)))


def is_forest_tournament(T):
    return find_forest_ordering(T) is not None


def forest_two_coloring(T, ordering):
    """
    Colouring with at most two colours from a forest ordering.

    The backedge graph is a forest; a proper 2-colouring of it leaves no
    backward edge inside a class, so each class is transitive.

    Raises:
        PreconditionError: If ordering is not a forest ordering
    """
    ordering = _as_ordering(T, ordering)
    if not is_forest_ordering(T, ordering):
        raise PreconditionError("ordering is not a forest ordering")
    sides = nx.bipartite.color(BackedgeGraph(T, ordering).graph)
    return Coloring(assign=tuple(sides[v] for v in range(T.n))).compacted()


class IncomparableMap(BaseModel):
    """Injective vertex -> positive integer map, phi[v] for vertex v, with strength r."""

    model_config = ConfigDict(frozen=True)

    phi: tuple[int, ...]
    r: int = Field(ge=1)

    @field_validator("phi")
    @classmethod
    def check_injective(cls, value):
        if len(set(value)) != len(value):
            raise ValueError("phi must be injective")
        if any(x < 1 for x in value):
            raise ValueError("phi values must be positive")
        return value

    @property
    def ordering(self):
        return Ordering.from_phi(self.phi)

    def gap(self, edge):
        u, v = edge
        return abs(self.phi[u] - self.phi[v])


def build_incomparable_map(T, ordering, r):
    """
    An r-incomparable map whose induced ordering is the given forest ordering.

    Splits at the leftmost forest cut, builds maps for both sides, keeps the
    left map and places the right one at
    phi1(last left) + a*b*(r+1)^2 + a*(r+1)*phi2(v), where a and b are the
    spans of the two side maps, each raised to at least 1.

    Args:
        T (Tournament): Tournament
        ordering (Ordering): Forest ordering of T
        r (int): Strength, at least 1

    Returns:
        IncomparableMap: The constructed map

    Raises:
        PreconditionError: If ordering is not a forest ordering or r < 1
    """
    ordering = _as_ordering(T, ordering)
    if r < 1:
        raise PreconditionError(f"r must be at least 1, got {r}")
    intervals = _IntervalForest(T, ordering.seq)
    if intervals.decide(0, T.n) is None:
        raise PreconditionError("ordering is not a forest ordering")
    seq = ordering.seq

    def build(lo, hi):
        if hi - lo == 1:
            return {seq[lo]: 1}
        cut = intervals.decide(lo, hi)
        left = build(lo, cut)
        right = build(cut, hi)
        a = max(left[seq[cut - 1]] - left[seq[lo]], 1)
        b = max(right[seq[hi - 1]] - right[seq[cut]], 1)
        base = left[seq[cut - 1]] + a * b * (r + 1) ** 2
        combined = dict(left)
        for v, value in right.items():
            combined[v] = base + a * (r + 1) * value
        return combined

    if T.n == 0:
        return IncomparableMap(phi=(), r=r)
    phi = build(0, T.n)
    return IncomparableMap(phi=tuple(phi[v] for v in range(T.n)), r=r)


def _path_length_through(graph, e, f):
    """Fewest edges on a simple path using both e and f, or None."""
    best = None
    for x, x_other in (e, e[::-1]):
        for y, y_other in (f, f[::-1]):
            if x_other in f or y_other in e:
                if x == y:
                    best = 2 if best is None else min(best, 2)
                continue
            blocked = graph.subgraph(v for v in graph.nodes if v not in (x_other, y_other))
            try:
                d = nx.shortest_path_length(blocked, x, y)
            except nx.NetworkXNoPath:
                continue
            best = d + 2 if best is None else min(best, d + 2)
    return best


def verify_incomparable(T, mapping, path_cap=None):
    """
    Check that no two constrained backedges have gap ratio within [1/r, r].

    Without path_cap, every pair of backedges in the same component of the
    backedge graph of the map's ordering is constrained. With path_cap s,
    only pairs lying together on a path of at most s edges are.

    Args:
        T (Tournament): Tournament
        mapping (IncomparableMap): Map to check
        path_cap (int, optional): Path length cap s

    Returns:
        bool: True iff no constrained pair is comparable
    """
    if len(mapping.phi) != T.n:
        raise PreconditionError(f"map covers {len(mapping.phi)} vertices, tournament has {T.n}")
    graph = BackedgeGraph(T, mapping.ordering)
    r = mapping.r
    for e, f in itertools.combinations(graph.edges, 2):
        if graph.component_of(e[0]) != graph.component_of(f[0]):
            continue
        if path_cap is not None:
            length = _path_length_through(graph.graph, e, f)
            if length is None or length > path_cap:
                continue
        ge, gf = mapping.gap(e), mapping.gap(f)
        if not (ge > r * gf or gf > r * ge):
            logger.debug("✗ Backedges %s and %s are comparable at r=%d", e, f, r)
            return False
    return True
