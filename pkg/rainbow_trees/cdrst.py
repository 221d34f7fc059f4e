"""
cdrst.py

Solver for t color-disjoint rainbow spanning trees.

The solver hill-climbs the deletion-process preorder from a greedy family.
At a local maximum either every forest is a spanning tree, or the meet of the
stabilized forests' component partitions violates the partition condition
and is returned as the certificate.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .config import settings
from .deletion import (
    ForestScope,
    HillClimbResult,
    claim_a_holds,
    hill_climb,
    move_bound,
)
from .dumps import fail
from .graph import (
    DisjointMode,
    DisjointSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    GraphError,
    VertexPartition,
    color_multiplicities,
    meet_partitions,
    require_valid,
)
from .partitions import Deficiency, deficiency_cd, scan_partitions
from .search import exhaustive_color_disjoint_search

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Certificate:
    """Trees (existence witness) or a violating partition (non-existence witness)."""
    trees: Optional[ForestFamily] = None
    violation: Optional[Deficiency] = None
    route: str = "hill-climb"
    rounds: int = 0
    moves: int = 0
    partitions_scanned: int = 0
    nodes: int = 0
    guarantee: Optional[DisjointMode] = None

    @property
    def found(self) -> bool:
        return self.trees is not None

    @property
    def proven_absent(self) -> bool:
        """No trees and no violating partition: exact search ruled the instance out."""
        return self.trees is None and self.violation is None


def greedy_initial_family(
    graph: EdgeColoredMultigraph,
    t: int,
    frozen: Optional[Sequence[Forest]] = None,
    pool: Optional[Sequence[int]] = None,
) -> ForestFamily:
    """
    Scan pool edges in index order and put each into the first forest where it
    closes no cycle, provided its color is not yet used anywhere in the family.

    With `frozen` forests the family starts from them (their colors count as
    used), which gives an edge-maximal color-disjoint extension.
    """
    start = list(frozen) if frozen is not None else [Forest(()) for _ in range(t)]
    if len(start) != t:
        raise ValueError(f"expected {t} frozen forests, got {len(start)}")
    pool = range(graph.num_edges) if pool is None else sorted(pool)

    components: List[DisjointSet] = []
    members: List[List[int]] = []
    used_colors = set()
    for forest in start:
        ds = DisjointSet(graph.n)
        for e in forest.edges:
            ds.merge(*graph.endpoints(e))
        components.append(ds)
        members.append(list(forest.edges))
        used_colors |= forest.colors(graph)

    taken = {e for forest in start for e in forest.edges}
    for e in pool:
        c = graph.color(e)
        if e in taken or c in used_colors:
            continue
        u, v = graph.endpoints(e)
        for j, ds in enumerate(components):
            if ds.merge(u, v):
                members[j].append(e)
                used_colors.add(c)
                break

    mode = DisjointMode.COLOR_DISJOINT if frozen is None else DisjointMode.EDGE_DISJOINT
    return ForestFamily(tuple(Forest(tuple(m)) for m in members), mode)


def climb(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    scope: ForestScope,
    step: str,
) -> HillClimbResult:
    """
    Hill-climb with the configured move bound.

    Raises:
        InternalFailure: If the move bound is exceeded
    """
    limit = move_bound(graph, family.t, settings.solver.move_factor)
    try:
        result = hill_climb(graph, family, scope, max_moves=limit)
    except RuntimeError as e:
        raise fail(step, graph, str(e))
    trace = result.trace
    logger.debug(f"Hill climb finished after {result.moves} moves, {len(trace.rounds)} deletion rounds")
    if not trace.bookkeeping_holds() or not claim_a_holds(graph, trace, scope):
        logger.warning(f"Local maximum of {step} fails the deletion-process invariants; certificate will be searched")
    return result


def meet_of(partitions: Sequence[VertexPartition], n: int) -> VertexPartition:
    meet = VertexPartition.whole(n)
    for partition in partitions:
        meet = meet_partitions(meet, partition)
    return meet


def solve_color_disjoint(
    graph: EdgeColoredMultigraph,
    t: int,
    *,
    threads: Optional[int] = None,
    budget: Optional[int] = None,
) -> Certificate:
    """
    Find t color-disjoint rainbow spanning trees or a partition P with
    |c(cr(P))| < t(|P| - 1).

    Raises:
        InternalFailure: If neither trees nor a violating partition can be produced
        BudgetExhaustedError: If the last-resort tree search runs out of budget
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return Certificate(trees=ForestFamily.empty(0), route="trivial")
    if graph.n <= 1:
        return Certificate(trees=ForestFamily.empty(t), route="trivial")

    logger.info(f"Solving for {t} color-disjoint rainbow spanning trees (n={graph.n}, m={graph.num_edges})")
    scope = ForestScope.full(graph, t)
    result = climb(graph, greedy_initial_family(graph, t), scope, "hill-climb")
    family, trace = result.family, result.trace
    stats = dict(rounds=len(trace.rounds), moves=result.moves)

    if family.is_spanning(graph):
        require_valid(graph, family)
        logger.info(f"Found {t} trees after {result.moves} moves")
        return Certificate(trees=family, route="hill-climb", **stats)

    meet = meet_of(trace.stabilized_partitions, graph.n)
    if meet.block_count >= 2:
        deficiency = deficiency_cd(graph, meet, t)
        if deficiency.violated:
            logger.info(f"Violating partition {meet} with deficiency {deficiency.value}")
            return Certificate(violation=deficiency, route="meet", **stats)
    logger.warning(f"Meet partition {meet} does not confirm; scanning all partitions")

    scan = scan_partitions(graph, t, threads=threads)
    if scan.violation is not None:
        return Certificate(violation=scan.violation, route="partition-scan", partitions_scanned=scan.scanned, **stats)

    if not settings.solver.fallback_tree_search:
        raise fail("certificate", graph, f"t={t}: no trees and no violating partition")
    logger.warning("No violating partition exists; falling back to exact tree search")
    outcome = exhaustive_color_disjoint_search(graph, t, budget)
    if outcome.trees is None:
        raise fail("certificate", graph, f"t={t}: partition condition holds but tree search found nothing")
    return Certificate(
        trees=outcome.trees,
        route="tree-search",
        partitions_scanned=scan.scanned,
        nodes=outcome.nodes,
        **stats,
    )


def corollary_threshold_check(graph: EdgeColoredMultigraph, t: int) -> bool:
    """
    True iff every color of the complete graph occurs at most n/(2t) times,
    which guarantees t color-disjoint rainbow spanning trees.

    Raises:
        GraphError: If the graph is not a simple complete graph
    """
    if not graph.is_complete_simple():
        raise GraphError("threshold check needs a simple complete graph")
    if t < 1:
        raise ValueError("t must be positive")
    highest = max(color_multiplicities(graph).values(), default=0)
    return 2 * t * highest <= graph.n
