"""
Core tournament value type and the composition operators.

Vertices are the integers 0..n-1. Internally every vertex keeps its
out-neighbourhood as an int bitmask; the numpy adjacency matrix is built on
demand and is read-only. Block positions of a Δ-composition are 1-based, as
are family labels like v1..v5; every conversion between the two lives here.
"""

import logging
from functools import cached_property

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from utils.errors import TournamentValidationError

logger = logging.getLogger(__name__)


def mask_of(vertices):
    """
    Pack vertex indices into an int bitmask.

    Args:
        vertices (iterable of int): Vertex indices

    Returns:
        int: Bitmask with bit v set for each vertex v
    """
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def members(mask):
    """
    Unpack an int bitmask into an ascending tuple of vertex indices.

    Args:
        mask (int): Bitmask

    Returns:
        tuple: Vertex indices in increasing order
    """
    result = []
    while mask:
        low = mask & -mask
        result.append(low.bit_length() - 1)
        mask ^= low
    return tuple(result)


def _vertex_list(S, n):
    if isinstance(S, (set, frozenset)):
        vertices = sorted(S)
    else:
        vertices = [int(v) for v in S]
    seen = set()
    for v in vertices:
        if not 0 <= v < n:
            raise TournamentValidationError(f"vertex {v} out of range for n={n}")
        if v in seen:
            raise TournamentValidationError(f"vertex {v} listed twice")
        seen.add(v)
    return vertices


class Tournament:
    """
    An immutable tournament on vertices 0..n-1.

    Equality and hashing are by labelled structure; use
    components.isomorphism for comparisons up to isomorphism.
    """

    __slots__ = ("n", "_out", "__dict__")

    def __init__(self, out_masks):
        """
        Initialize the Tournament class from out-neighbourhood bitmasks.

        Callers outside this module should use build(), from_matrix() or the
        family generators; no validation happens here.

        Args:
            out_masks (sequence of int): out_masks[v] has bit u set iff v→u
        """
        self.n = len(out_masks)
        self._out = tuple(out_masks)

    @classmethod
    def build(cls, n, edges):
        """
        Build a tournament from an explicit edge list.

        Args:
            n (int): Number of vertices
            edges (iterable of (int, int)): Ordered pairs u→v

        Returns:
            Tournament: The validated tournament

        Raises:
            TournamentValidationError: On a loop, an out-of-range vertex, a pair
                given twice, or a pair left unassigned
        """
        if n < 0:
            raise TournamentValidationError(f"vertex count must be nonnegative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            u, v = int(u), int(v)
            for w in (u, v):
                if not 0 <= w < n:
                    raise TournamentValidationError(f"vertex {w} out of range for n={n}")
            if u == v:
                raise TournamentValidationError(f"loop at vertex {u}")
            if adj[u, v] or adj[v, u]:
                a, b = sorted((u, v))
                raise TournamentValidationError(f"pair {{{a},{b}}} assigned twice")
            adj[u, v] = True
        missing = np.argwhere(np.triu(~(adj | adj.T), k=1))
        if len(missing):
            a, b = (int(x) for x in missing[0])
            raise TournamentValidationError(f"pair {{{a},{b}}} unassigned")
        return cls.from_matrix(adj)

    @classmethod
    def from_matrix(cls, matrix):
        """
        Build a tournament from an n×n 0/1 adjacency matrix.

        Args:
            matrix (array-like): matrix[u][v] truthy iff u→v

        Returns:
            Tournament: The validated tournament

        Raises:
            TournamentValidationError: If the matrix is not a tournament
        """
        adj = np.asarray(matrix, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise TournamentValidationError(f"adjacency matrix must be square, got shape {adj.shape}")
        n = adj.shape[0]
        loops = np.flatnonzero(np.diag(adj))
        if len(loops):
            raise TournamentValidationError(f"loop at vertex {int(loops[0])}")
        both = np.argwhere(np.triu(adj & adj.T, k=1))
        if len(both):
            a, b = (int(x) for x in both[0])
            raise TournamentValidationError(f"pair {{{a},{b}}} assigned twice")
        neither = np.argwhere(np.triu(~(adj | adj.T), k=1))
        if len(neither):
            a, b = (int(x) for x in neither[0])
            raise TournamentValidationError(f"pair {{{a},{b}}} unassigned")
        out = [mask_of(int(u) for u in np.flatnonzero(adj[v])) for v in range(n)]
        return cls(out)

    @cached_property
    def adj(self):
        """Read-only numpy boolean adjacency matrix."""
        matrix = np.zeros((self.n, self.n), dtype=bool)
        for v in range(self.n):
            for u in members(self._out[v]):
                matrix[v, u] = True
        matrix.setflags(write=False)
        return matrix

    @property
    def vertex_mask(self):
        return (1 << self.n) - 1

    def out_mask(self, v):
        return self._out[v]

    def in_mask(self, v):
        return self.vertex_mask & ~self._out[v] & ~(1 << v)

    def beats(self, u, v):
        """True iff u→v."""
        return bool(self._out[u] >> v & 1)

    def edges(self):
        """All edges (u, v) with u→v, sorted."""
        return [(u, v) for u in range(self.n) for v in members(self._out[u])]

    def scores(self):
        """Out-degree of every vertex."""
        return tuple(m.bit_count() for m in self._out)

    def rows(self):
        """The adjacency matrix as n strings of '0'/'1'."""
        return ["".join("1" if self._out[u] >> v & 1 else "0" for v in range(self.n)) for u in range(self.n)]

    def induced(self, S):
        """
        The subtournament T|S.

        A list or tuple keeps its order (new vertex i is S[i]); a set is taken
        in increasing order.

        Args:
            S (iterable of int): Vertices to keep

        Returns:
            Tournament: Tournament on len(S) vertices
        """
        vertices = _vertex_list(S, self.n)
        out = []
        for a in vertices:
            row = self._out[a]
            mask = 0
            for i, b in enumerate(vertices):
                if row >> b & 1:
                    mask |= 1 << i
            out.append(mask)
        return Tournament(out)

    def induced_mask(self, mask):
        """T|S for S given as a bitmask, in increasing vertex order."""
        return self.induced(members(mask))

    def complement(self):
        """The tournament with every edge reversed."""
        return Tournament([self.in_mask(v) for v in range(self.n)])

    def is_transitive_mask(self, mask):
        """Bitmask form of is_transitive_set."""
        seen = 0
        for v in members(mask):
            score = (self._out[v] & mask).bit_count()
            if seen >> score & 1:
                return False
            seen |= 1 << score
        return True

    def is_transitive_set(self, S):
        """
        Whether T|S has no directed cycle.

        A subtournament is acyclic iff its scores are pairwise distinct.

        Args:
            S (iterable of int): Vertex set

        Returns:
            bool: True iff S is transitive
        """
        return self.is_transitive_mask(mask_of(_vertex_list(S, self.n)))

    def is_transitive(self):
        return self.is_transitive_mask(self.vertex_mask)

    def transitive_order(self, mask=None):
        """
        Vertices of a transitive set from source to sink.

        Args:
            mask (int, optional): Transitive vertex set, default all vertices

        Returns:
            tuple: Vertices sorted by decreasing score inside the set
        """
        if mask is None:
            mask = self.vertex_mask
        return tuple(sorted(members(mask), key=lambda v: -(self._out[v] & mask).bit_count()))

    def to_networkx(self):
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @cached_property
    def _components(self):
        graph = self.to_networkx()
        condensed = nx.condensation(graph)
        order = list(nx.topological_sort(condensed))
        return tuple(tuple(sorted(condensed.nodes[c]["members"])) for c in order)

    def strong_components(self):
        """
        Strong components in condensation order.

        Every earlier component is complete to every later one.

        Returns:
            list of tuple: Vertex tuples, each sorted ascending
        """
        return list(self._components)

    def is_strong(self):
        return len(self._components) <= 1

    def cyclic_triangles_at(self, v):
        """Number of cyclic triangles through v."""
        in_v = self.in_mask(v)
        return sum((self._out[a] & in_v).bit_count() for a in members(self._out[v]))

    def apex_splits(self):
        """
        Trisections with a single-vertex first part.

        Yields:
            tuple: (x, Y, Z) with Y = out(x), Z = in(x), both nonempty and Y ⇒ Z
        """
        for x in range(self.n):
            y_mask = self._out[x]
            z_mask = self.in_mask(x)
            if not y_mask or not z_mask:
                continue
            if all(self._out[y] & z_mask == z_mask for y in members(y_mask)):
                yield x, members(y_mask), members(z_mask)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Tournament):
            return NotImplemented
        return self._out == other._out

    def __hash__(self):
        return hash(self._out)

    def __repr__(self):
        return f"Tournament(n={self.n}, rows={self.rows()})"


def compose_chain(T1, T2):
    """
    T1 ⇒ T2: disjoint union with every T1 vertex beating every T2 vertex.

    Args:
        T1 (Tournament): First part, vertices 0..n1-1
        T2 (Tournament): Second part, vertices n1..n1+n2-1

    Returns:
        Tournament: The chained tournament
    """
    shift = T1.n
    tail = ((1 << T2.n) - 1) << shift
    out = [T1.out_mask(v) | tail for v in range(T1.n)]
    out += [T2.out_mask(v) << shift for v in range(T2.n)]
    return Tournament(out)


def delta_block_ranges(sizes):
    """
    Vertex ranges occupied by the blocks of a Δ-composition.

    Args:
        sizes (sequence of int): Block sizes in order

    Returns:
        list of range: One range per block
    """
    ranges = []
    start = 0
    for size in sizes:
        ranges.append(range(start, start + size))
        start += size
    return ranges


def delta_blocks(sizes):
    """Block vertex tuples of a Δ-composition with the given block sizes."""
    return [tuple(r) for r in delta_block_ranges(sizes)]


def delta_forward(i, j):
    """
    Direction between Δ-blocks at 1-based positions i < j.

    Returns:
        bool: True if block i is complete to block j, False if j is complete to i
    """
    return not (i % 2 == 1 and j % 2 == 1)


def compose_delta(blocks):
    """
    Δ-composition of an odd-length list of tournaments.

    For 1-based positions i < j, block j is complete to block i when both
    positions are odd; otherwise block i is complete to block j.

    Args:
        blocks (list of Tournament): 2k-1 tournaments

    Returns:
        Tournament: Blocks laid out consecutively

    Raises:
        TournamentValidationError: On an empty or even-length list
    """
    if len(blocks) % 2 == 0:
        raise TournamentValidationError(f"Δ-composition needs an odd number of blocks, got {len(blocks)}")
    ranges = delta_block_ranges([b.n for b in blocks])
    block_masks = [mask_of(r) for r in ranges]
    out = []
    for i, block in enumerate(blocks, start=1):
        shift = ranges[i - 1].start
        beaten = 0
        for j in range(1, len(blocks) + 1):
            if j == i:
                continue
            low, high = min(i, j), max(i, j)
            forward = delta_forward(low, high)
            if (i == low) == forward:
                beaten |= block_masks[j - 1]
        for v in range(block.n):
            out.append((block.out_mask(v) << shift) | beaten)
    return Tournament(out)


def substitute(T1, v, T2):
    """
    Substitute T2 for vertex v of T1.

    T1's vertices before v keep their labels, T2 takes labels v..v+|T2|-1 and
    the remaining T1 vertices shift up by |T2|-1.

    Args:
        T1 (Tournament): Host tournament
        v (int): Vertex of T1 to replace
        T2 (Tournament): Nonempty tournament inserted in place of v

    Returns:
        Tournament: The substituted tournament

    Raises:
        TournamentValidationError: If v is out of range or a tournament is empty
    """
    if T1.n == 0 or T2.n == 0:
        raise TournamentValidationError("substitution needs two nonempty tournaments")
    if not 0 <= v < T1.n:
        raise TournamentValidationError(f"vertex {v} out of range for n={T1.n}")
    m = T2.n
    block = ((1 << m) - 1) << v

    def relabel(mask):
        low = mask & ((1 << v) - 1)
        high = mask >> (v + 1) << (v + m)
        result = low | high
        if mask >> v & 1:
            result |= block
        return result

    out = [relabel(T1.out_mask(u)) for u in range(v)]
    outside = relabel(T1.out_mask(v))
    out += [(T2.out_mask(u) << v) | outside for u in range(m)]
    out += [relabel(T1.out_mask(u)) for u in range(v + 1, T1.n)]
    return Tournament(out)


class Ordering(BaseModel):
    """A permutation of a tournament's vertices, earliest first."""

    model_config = ConfigDict(frozen=True)

    seq: tuple[int, ...]

    @field_validator("seq")
    @classmethod
    def check_permutation(cls, value):
        if sorted(value) != list(range(len(value))):
            raise ValueError(f"ordering {list(value)} is not a permutation of 0..{len(value) - 1}")
        return value

    @classmethod
    def identity(cls, n):
        return cls(seq=tuple(range(n)))

    @classmethod
    def from_phi(cls, phi):
        """
        The ordering σ_φ that sorts vertices by increasing φ value.

        Args:
            phi (sequence of int): Injective map, phi[v] for vertex v

        Returns:
            Ordering: Vertices sorted by phi
        """
        if len(set(phi)) != len(phi):
            raise ValueError("phi is not injective")
        return cls(seq=tuple(sorted(range(len(phi)), key=lambda v: phi[v])))

    @property
    def positions(self):
        pos = [0] * len(self.seq)
        for i, v in enumerate(self.seq):
            pos[v] = i
        return pos

    def restrict(self, S):
        """Sub-ordering σ|S of the vertices in S, as a vertex sequence."""
        keep = set(S)
        return tuple(v for v in self.seq if v in keep)

    def __len__(self):
        return len(self.seq)
