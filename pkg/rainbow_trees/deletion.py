"""
deletion.py

The deterministic deletion process on a family of rainbow spanning forests,
the preorder on families it induces, and the exchange step that climbs that
preorder.

Every operation takes an optional ForestScope. The default scope is the whole
graph with nothing frozen (color-disjoint trees). The extension solver passes
the restricted graph G' as the pool and the given forests as frozen edges, so
crossing colors are measured on G' only and frozen edges are never deleted or
swapped out.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .graph import (
    ColorSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    VertexPartition,
    forest_components,
    fundamental_cycle,
    require_valid,
)

logger = logging.getLogger(__name__)


class FamilyOrder(str, Enum):
    LESS = "less"
    EQUAL = "equal-prefix"
    GREATER = "greater"


@dataclass(frozen=True)
class ForestScope:
    """Eligible edges (the pool) and per-forest frozen edges."""
    pool: FrozenSet[int]
    frozen: Tuple[FrozenSet[int], ...]

    @classmethod
    def full(cls, graph: EdgeColoredMultigraph, t: int) -> "ForestScope":
        return cls(pool=frozenset(range(graph.num_edges)), frozen=tuple(frozenset() for _ in range(t)))

    def movable(self, forest_index: int, edge: int) -> bool:
        return edge not in self.frozen[forest_index]


def _resolve(graph: EdgeColoredMultigraph, family: ForestFamily, scope: Optional[ForestScope]) -> ForestScope:
    scope = scope or ForestScope.full(graph, family.t)
    if len(scope.frozen) != family.t:
        raise ValueError(f"scope freezes {len(scope.frozen)} forests, family has {family.t}")
    return scope


@dataclass(frozen=True)
class DeletionRound:
    """One iteration: the forests F_j^(i) entering it and the colors C_i it deletes."""
    colors: ColorSet
    forests: Tuple[FrozenSet[int], ...]
    partitions: Tuple[VertexPartition, ...]
    crossing: ColorSet


@dataclass(frozen=True)
class DeletionTrace:
    rounds: Tuple[DeletionRound, ...]
    stabilized: Tuple[FrozenSet[int], ...]
    stabilized_partitions: Tuple[VertexPartition, ...]
    stabilized_crossing: ColorSet

    def snapshots(self) -> List[Tuple[FrozenSet[int], ...]]:
        return [r.forests for r in self.rounds] + [self.stabilized]

    def partitions(self) -> List[Tuple[VertexPartition, ...]]:
        return [r.partitions for r in self.rounds] + [self.stabilized_partitions]

    def crossings(self) -> List[ColorSet]:
        return [r.crossing for r in self.rounds] + [self.stabilized_crossing]

    def sizes(self) -> List[int]:
        """Total forest size after each number of iterations (the preorder key)."""
        return [sum(len(f) for f in snapshot) for snapshot in self.snapshots()]

    def component_sums(self) -> List[int]:
        return [sum(p.block_count for p in parts) for parts in self.partitions()]

    def bookkeeping_holds(self) -> bool:
        """Each round raises the total component count by exactly |C_i|."""
        sums = self.component_sums()
        return all(sums[i + 1] == sums[i] + len(r.colors) for i, r in enumerate(self.rounds))


def _crossing_colors(
    graph: EdgeColoredMultigraph,
    partitions: Sequence[VertexPartition],
    pool: FrozenSet[int],
) -> ColorSet:
    colors = set()
    for e in pool:
        u, v, c = graph.edges[e]
        if c in colors:
            continue
        if any(p.separates(u, v) for p in partitions):
            colors.add(c)
    return frozenset(colors)


def deletion_process(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    scope: Optional[ForestScope] = None,
) -> DeletionTrace:
    """
    Run the deletion loop to stability.

    C' starts as the union of colors of pool edges crossing some forest's
    component partition. Each round deletes from every forest its movable edge
    (if any) of each color in C', then C' becomes the newly crossing colors
    minus everything processed so far. The loop ends when C' is empty.

    Raises:
        InvalidFamilyError: If the family fails validation
    """
    require_valid(graph, family)
    scope = _resolve(graph, family, scope)
    forests = [frozenset(f.edges) for f in family.forests]
    processed: set = set()
    rounds: List[DeletionRound] = []
    while True:
        partitions = tuple(forest_components(graph, f) for f in forests)
        crossing = _crossing_colors(graph, partitions, scope.pool)
        colors = crossing - processed
        if not colors:
            return DeletionTrace(
                rounds=tuple(rounds),
                stabilized=tuple(forests),
                stabilized_partitions=partitions,
                stabilized_crossing=crossing,
            )
        rounds.append(DeletionRound(frozenset(colors), tuple(forests), partitions, crossing))
        processed |= colors
        forests = [
            frozenset(e for e in f if not (scope.movable(j, e) and graph.color(e) in colors))
            for j, f in enumerate(forests)
        ]


def compare_families(
    first: ForestFamily,
    second: ForestFamily,
    graph: EdgeColoredMultigraph,
    scope: Optional[ForestScope] = None,
) -> FamilyOrder:
    """
    Compare two families by the lexicographic order of their per-round total
    forest sizes along the deletion process (shorter traces padded with their
    stable size).
    """
    a = deletion_process(graph, first, scope).sizes()
    b = deletion_process(graph, second, scope).sizes()
    return _compare_sizes(a, b)


def _compare_sizes(a: List[int], b: List[int]) -> FamilyOrder:
    length = max(len(a), len(b))
    a = a + [a[-1]] * (length - len(a))
    b = b + [b[-1]] * (length - len(b))
    if a < b:
        return FamilyOrder.LESS
    if a > b:
        return FamilyOrder.GREATER
    return FamilyOrder.EQUAL


def claim_a_holds(graph: EdgeColoredMultigraph, trace: DeletionTrace, scope: ForestScope) -> bool:
    """
    Containment: every color crossing after i iterations already crossed after
    i-1 iterations or still sits on a pool edge of some forest.
    """
    snapshots = trace.snapshots()
    crossings = trace.crossings()
    for i in range(1, len(snapshots)):
        present = graph.colors_of(e for forest in snapshots[i] for e in forest if e in scope.pool)
        if not crossings[i] <= crossings[i - 1] | present:
            return False
    return True


# --------------------------------------------------------------------------------------
# Moves
# --------------------------------------------------------------------------------------

def _fresh_colors(graph: EdgeColoredMultigraph, family: ForestFamily, scope: ForestScope) -> List[int]:
    used = family.colors(graph)
    return sorted({graph.color(e) for e in scope.pool} - used)


def _pool_edges_of(graph: EdgeColoredMultigraph, color: int, scope: ForestScope) -> List[int]:
    return [e for e in graph.color_classes[color] if e in scope.pool]


def growth_move(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    scope: Optional[ForestScope] = None,
) -> Optional[ForestFamily]:
    """Add a fresh-colored pool edge joining two components of some forest."""
    scope = _resolve(graph, family, scope)
    partitions = [forest_components(graph, f.edges) for f in family.forests]
    for color in _fresh_colors(graph, family, scope):
        for s, partition in enumerate(partitions):
            for e in _pool_edges_of(graph, color, scope):
                if partition.separates(*graph.endpoints(e)):
                    logger.debug(f"Growth move: edge {e} (color {color}) into forest {s}")
                    return family.replace(s, family[s].with_edges(added=(e,)))
    return None


def exchange_augment(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    scope: Optional[ForestScope] = None,
) -> Optional[ForestFamily]:
    """
    Find a family strictly greater in the preorder, or None at a local maximum.

    Tries the growth move first. Otherwise looks, round by round, for a color x
    absent from every forest that crosses F_s^(i) but crossed no forest after
    i-1 iterations; an edge e of color x then closes a cycle in F_s^(i-1), and
    an edge e' of that cycle joining two components of F_s^(i) is swapped out:
    F_s := F_s - e' + e. Candidates are tried by round, color, forest, edge e,
    edge e' (lowest first); only a strictly greater family is returned.

    Raises:
        InvalidFamilyError: If the family fails validation
    """
    scope = _resolve(graph, family, scope)
    grown = growth_move(graph, family, scope)
    if grown is not None:
        return grown

    trace = deletion_process(graph, family, scope)
    baseline = trace.sizes()
    fresh = _fresh_colors(graph, family, scope)
    if not fresh:
        return None
    snapshots = trace.snapshots()
    partitions = trace.partitions()
    crossings = trace.crossings()

    for i in range(1, len(snapshots)):
        previous_crossing = crossings[i - 1]
        for color in fresh:
            if color in previous_crossing or color not in crossings[i]:
                continue
            for s in range(family.t):
                current = partitions[i][s]
                for e in _pool_edges_of(graph, color, scope):
                    if not current.separates(*graph.endpoints(e)):
                        continue
                    cycle = fundamental_cycle(graph, snapshots[i - 1][s], e)
                    for removed in sorted(cycle):
                        if not scope.movable(s, removed) or not current.separates(*graph.endpoints(removed)):
                            continue
                        candidate = family.replace(s, family[s].with_edges(added=(e,), removed=(removed,)))
                        sizes = deletion_process(graph, candidate, scope).sizes()
                        if _compare_sizes(sizes, baseline) is FamilyOrder.GREATER:
                            logger.debug(
                                f"Exchange at round {i}: forest {s} swaps edge {removed} for {e} (color {color})"
                            )
                            return candidate
    return None


@dataclass(frozen=True)
class HillClimbResult:
    family: ForestFamily
    trace: DeletionTrace
    moves: int


def move_bound(graph: EdgeColoredMultigraph, t: int, factor: int = 1) -> int:
    return max(1, graph.num_edges * max(t, 1) * (graph.num_colors + 2) * max(factor, 1))


def hill_climb(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    scope: Optional[ForestScope] = None,
    max_moves: Optional[int] = None,
) -> HillClimbResult:
    """
    Apply exchange_augment until no move applies.

    Raises:
        RuntimeError: If more than `max_moves` moves are taken (the preorder
            strictly increases with each move, so this signals a defect)
    """
    scope = _resolve(graph, family, scope)
    limit = move_bound(graph, family.t) if max_moves is None else max_moves
    moves = 0
    while True:
        improved = exchange_augment(graph, family, scope)
        if improved is None:
            break
        family = improved
        moves += 1
        if moves > limit:
            raise RuntimeError(f"hill climb exceeded {limit} moves")
    return HillClimbResult(family=family, trace=deletion_process(graph, family, scope), moves=moves)


def family_from_snapshot(snapshot: Sequence[FrozenSet[int]], template: ForestFamily) -> ForestFamily:
    return ForestFamily(tuple(Forest(tuple(f)) for f in snapshot), template.mode)
