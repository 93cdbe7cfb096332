"""
Exact tournament chromatic number.

A colouring partitions the vertices into transitive classes. The exact
engine searches residual vertex sets: the class containing the lowest
remaining vertex may always be grown until it is maximal inside the
residual set, so only those maximal transitive sets are branched on.
"""

import logging

from pydantic import BaseModel, ConfigDict, computed_field

from components.tournament import mask_of, members
from utils.errors import PreconditionError, SizeLimitError, UndecidedError
from utils.settings_manager import get_settings

logger = logging.getLogger(__name__)


class Coloring(BaseModel):
    """Vertex -> colour index; assign[v] is the colour of vertex v."""

    model_config = ConfigDict(frozen=True)

    assign: tuple[int, ...]

    @computed_field
    @property
    def k(self) -> int:
        return len(set(self.assign))

    @classmethod
    def from_classes(cls, n, classes):
        """
        Build a colouring from its colour classes.

        Args:
            n (int): Number of vertices
            classes (iterable of iterable of int): Class i gets colour i

        Returns:
            Coloring: The colouring

        Raises:
            PreconditionError: If the classes do not cover every vertex once
        """
        assign = [None] * n
        for color, cls_vertices in enumerate(classes):
            for v in cls_vertices:
                if assign[v] is not None:
                    raise PreconditionError(f"vertex {v} coloured twice")
                assign[v] = color
        if None in assign:
            raise PreconditionError(f"vertex {assign.index(None)} left uncoloured")
        return cls(assign=tuple(assign))

    def classes(self):
        """Colour classes as sorted vertex tuples, ordered by colour value."""
        grouped = {}
        for v, color in enumerate(self.assign):
            grouped.setdefault(color, []).append(v)
        return [tuple(grouped[color]) for color in sorted(grouped)]

    def compacted(self):
        """Same partition with colours renumbered 0..k-1 by first occurrence."""
        mapping = {}
        for color in self.assign:
            mapping.setdefault(color, len(mapping))
        return Coloring(assign=tuple(mapping[color] for color in self.assign))


def is_valid_coloring(T, coloring):
    """
    Check that every colour class is transitive.

    Args:
        T (Tournament): Target tournament
        coloring (Coloring): Candidate colouring

    Returns:
        bool: True iff each class induces a transitive subtournament

    Raises:
        PreconditionError: If the assignment does not cover exactly V(T)
    """
    if len(coloring.assign) != T.n:
        raise PreconditionError(f"colouring covers {len(coloring.assign)} vertices, tournament has {T.n}")
    return all(T.is_transitive_mask(mask_of(cls_vertices)) for cls_vertices in coloring.classes())


def can_extend(T, class_mask, v):
    """Whether class_mask ∪ {v} stays transitive, given class_mask transitive."""
    out_v = T.out_mask(v) & class_mask
    in_v = T.in_mask(v) & class_mask
    for a in members(out_v):
        if T.out_mask(a) & in_v:
            return False
    return True


def maximal_transitive_sets(T, residual, anchor):
    """
    Transitive subsets of residual that contain anchor and are maximal in residual.

    Args:
        T (Tournament): Tournament
        residual (int): Bitmask of available vertices
        anchor (int): Vertex every returned set contains

    Returns:
        list of int: Bitmasks in lexicographic order of their sorted member tuples
    """
    others = [u for u in members(residual) if u != anchor]
    found = []

    def grow(index, chosen, skipped):
        if index == len(others):
            if all(not can_extend(T, chosen, u) for u in members(skipped)):
                found.append(chosen)
            return
        u = others[index]
        if can_extend(T, chosen, u):
            grow(index + 1, chosen | 1 << u, skipped)
        grow(index + 1, chosen, skipped | 1 << u)

    grow(0, 1 << anchor, 0)
    found.sort(key=members)
    return found


class ChromaticSolver:
    def __init__(self, T):
        """
        Initialize the ChromaticSolver class.

        Args:
            T (Tournament): Tournament to colour
        """
        self.T = T
        self._failed = {}
        self._options = {}

    def _check_size(self):
        limit = get_settings().chromatic_max_n
        if self.T.n > limit:
            raise SizeLimitError(f"exact colouring limited to {limit} vertices, got {self.T.n}")

    def _maximal_sets(self, residual):
        if residual not in self._options:
            anchor = (residual & -residual).bit_length() - 1
            self._options[residual] = maximal_transitive_sets(self.T, residual, anchor)
        return self._options[residual]

    def _solve(self, residual, k):
        """Classes covering residual with at most k colours, or None."""
        if residual == 0:
            return []
        if k == 0 or self._failed.get(residual, -1) >= k:
            return None
        if self.T.is_transitive_mask(residual):
            return [residual]
        if k == 1:
            self._failed[residual] = max(self._failed.get(residual, -1), k)
            return None
        for chosen in self._maximal_sets(residual):
            rest = self._solve(residual & ~chosen, k - 1)
            if rest is not None:
                return [chosen] + rest
        self._failed[residual] = max(self._failed.get(residual, -1), k)
        return None

    def find_k_coloring(self, k):
        """
        A colouring with at most k colours.

        Args:
            k (int): Colour budget

        Returns:
            Coloring or None: A valid colouring, or None iff none exists
        """
        if k < 0:
            raise PreconditionError(f"colour budget must be nonnegative, got {k}")
        self._check_size()
        classes = self._solve(self.T.vertex_mask, k)
        if classes is None:
            return None
        return Coloring.from_classes(self.T.n, [members(c) for c in classes])

    def chromatic_number(self):
        """
        Exact chromatic number with a witness colouring.

        Returns:
            tuple: (k, Coloring)
        """
        if self.T.n == 0:
            raise PreconditionError("chromatic number needs at least one vertex")
        self._check_size()
        lower, upper, greedy = self.bounds()
        for k in range(lower, upper):
            coloring = self.find_k_coloring(k)
            if coloring is not None:
                logger.debug("✓ χ = %d on %d vertices", k, self.T.n)
                return k, coloring
        return upper, greedy

    def greedy_coloring(self):
        """Peel off greedy maximal transitive sets, lowest vertex first."""
        residual = self.T.vertex_mask
        classes = []
        while residual:
            chosen = 0
            for v in members(residual):
                if can_extend(self.T, chosen, v):
                    chosen |= 1 << v
            classes.append(members(chosen))
            residual &= ~chosen
        return Coloring.from_classes(self.T.n, classes)

    def bounds(self):
        """
        Bounds-only mode for tournaments past the exact engine's limit.

        Returns:
            tuple: (lower, upper, greedy Coloring); lower is 1 when T is
            transitive and 2 otherwise, since any cyclic triangle needs two
            colours
        """
        greedy = self.greedy_coloring()
        lower = 0 if self.T.n == 0 else (1 if self.T.is_transitive() else 2)
        return lower, greedy.k, greedy

    def branch_and_bound_coloring(self, k, node_limit=None):
        """
        Targeted k-colourability search for tournaments too large for the exact engine.

        Picks the uncoloured vertex with the fewest admissible colours, tries
        used colours before one fresh colour, and backtracks as soon as some
        uncoloured vertex has no admissible colour left.

        Args:
            k (int): Colour budget
            node_limit (int, optional): Search node budget, default from settings

        Returns:
            Coloring or None: A colouring with at most k colours, or None if
            none exists

        Raises:
            UndecidedError: If the node budget runs out
        """
        if node_limit is None:
            node_limit = get_settings().refuter_node_limit
        n = self.T.n
        if n == 0:
            return Coloring(assign=())
        if k <= 0:
            return None
        assign = [-1] * n
        class_masks = [0] * k
        nodes = 0

        def admissible(v, used):
            colors = [c for c in range(used) if can_extend(self.T, class_masks[c], v)]
            if used < k:
                colors.append(used)
            return colors

        def search(colored, used):
            nonlocal nodes
            nodes += 1
            if nodes > node_limit:
                raise UndecidedError(f"branch-and-bound exceeded {node_limit} nodes at k={k}")
            if colored == n:
                return True
            best, best_colors = None, None
            for v in range(n):
                if assign[v] >= 0:
                    continue
                colors = admissible(v, used)
                if not colors:
                    return False
                if best is None or len(colors) < len(best_colors):
                    best, best_colors = v, colors
            for c in best_colors:
                assign[best] = c
                class_masks[c] |= 1 << best
                if search(colored + 1, max(used, c + 1)):
                    return True
                class_masks[c] &= ~(1 << best)
                assign[best] = -1
            return False

        if search(0, 0):
            return Coloring(assign=tuple(assign))
        logger.info("✗ No %d-colouring exists (%d nodes)", k, nodes)
        return None


def find_k_coloring(T, k):
    """Module-level shortcut for ChromaticSolver(T).find_k_coloring(k)."""
    return ChromaticSolver(T).find_k_coloring(k)


def chromatic_number(T):
    """Module-level shortcut for ChromaticSolver(T).chromatic_number()."""
    return ChromaticSolver(T).chromatic_number()


def chromatic_bounds(T):
    """Module-level shortcut for ChromaticSolver(T).bounds()."""
    return ChromaticSolver(T).bounds()
