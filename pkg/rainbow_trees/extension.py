"""
extension.py

Extension of edge-disjoint rainbow forests F_1..F_t to edge-disjoint rainbow
spanning trees T_i ⊇ F_i whose added edges carry pairwise distinct colors that
occur in no F_i.

The color-disjoint solver's machinery is reused with the given forests frozen
and the eligible edges restricted to G' (the graph minus every edge whose
color occurs in some F_i).
"""

import logging
from typing import Optional

from .config import settings
from .cdrst import Certificate, climb, greedy_initial_family, meet_of
from .deletion import ForestScope
from .dumps import fail
from .graph import (
    DisjointMode,
    EdgeColoredMultigraph,
    ForestFamily,
    RestrictedGraph,
    forest_components,
    restricted_graph,
    validate_family,
)
from .partitions import deficiency_ext, scan_partitions
from .search import exhaustive_extension_search

logger = logging.getLogger(__name__)

__all__ = ["RestrictedGraph", "restricted_graph", "extend_to_trees", "extension_guarantee", "is_valid_extension"]


def extension_guarantee(graph: EdgeColoredMultigraph, family: ForestFamily) -> DisjointMode:
    """Color-disjoint output is guaranteed exactly when the input forests are color-disjoint."""
    check = validate_family(graph, ForestFamily(family.forests, DisjointMode.COLOR_DISJOINT))
    return DisjointMode.COLOR_DISJOINT if check else DisjointMode.EDGE_DISJOINT


def is_valid_extension(graph: EdgeColoredMultigraph, family: ForestFamily, trees: ForestFamily) -> bool:
    """Trees span, contain their forests, and add only fresh pairwise distinct colors."""
    if trees.t != family.t or not trees.is_spanning(graph):
        return False
    if not validate_family(graph, ForestFamily(trees.forests, DisjointMode.EDGE_DISJOINT)):
        return False
    added = []
    for tree, forest in zip(trees.forests, family.forests):
        if not forest.edge_set <= tree.edge_set:
            return False
        added += [graph.color(e) for e in tree.edge_set - forest.edge_set]
    return len(set(added)) == len(added) and not set(added) & family.colors(graph)


def extend_to_trees(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    *,
    threads: Optional[int] = None,
    budget: Optional[int] = None,
) -> Certificate:
    """
    Extend the forests to trees, or return a partition P violating
    |c(cr(P, G'))| + sum_i |cr(P, F_i)| >= t(|P| - 1). That count is necessary
    but not sufficient: when every partition passes and exact search still
    finds no extension, the certificate is `proven_absent`.

    Raises:
        InvalidFamilyError: If the forests are not edge-disjoint rainbow forests
        InternalFailure: If exact search returns trees that are not a valid extension
        BudgetExhaustedError: If the last-resort tree search runs out of budget
    """
    restricted = restricted_graph(graph, family)
    guarantee = extension_guarantee(graph, family)
    t = family.t
    if t == 0 or graph.n <= 1:
        return Certificate(trees=family, route="trivial", guarantee=guarantee)

    logger.info(f"Extending {t} forests ({family.total_edges()} edges) with {len(restricted.edges)} edges of G'")
    scope = ForestScope(pool=restricted.edges, frozen=tuple(f.edge_set for f in family.forests))
    start = greedy_initial_family(graph, t, frozen=family.forests, pool=restricted.edges)
    result = climb(graph, start, scope, "extension-hill-climb")
    trees, trace = result.family, result.trace
    stats = dict(rounds=len(trace.rounds), moves=result.moves, guarantee=guarantee)

    if trees.is_spanning(graph):
        if not is_valid_extension(graph, family, trees):
            raise fail("extension-check", graph, "hill climb produced an invalid extension")
        logger.info(f"Extended to {t} trees after {result.moves} moves")
        return Certificate(trees=trees, route="hill-climb", **stats)

    added_only = [
        forest_components(graph, edges - frozen)
        for edges, frozen in zip(trace.stabilized, scope.frozen)
    ]
    meet = meet_of(added_only, graph.n)
    if meet.block_count >= 2:
        deficiency = deficiency_ext(graph, family, meet, t)
        if deficiency.violated:
            logger.info(f"Violating partition {meet} with deficiency {deficiency.value}")
            return Certificate(violation=deficiency, route="meet", **stats)
    logger.warning(f"Meet partition {meet} does not confirm; scanning all partitions")

    scan = scan_partitions(graph, t, family, threads=threads)
    if scan.violation is not None:
        return Certificate(violation=scan.violation, route="partition-scan", partitions_scanned=scan.scanned, **stats)

    if not settings.solver.fallback_tree_search:
        raise fail("extension-certificate", graph, f"t={t}: no extension and no violating partition")
    logger.warning("No violating partition exists; falling back to exact extension search")
    outcome = exhaustive_extension_search(graph, family, budget)
    if outcome.trees is None:
        # the partition count can hold while a vertex has no G' edge left for some forest
        logger.warning(f"No violating partition, but exact search rules out every extension of {t} forests")
        return Certificate(
            route="proven-absent",
            partitions_scanned=scan.scanned,
            nodes=outcome.nodes,
            **stats,
        )
    if not is_valid_extension(graph, family, outcome.trees):
        raise fail("extension-certificate", graph, f"t={t}: extension search returned an invalid extension")
    return Certificate(
        trees=outcome.trees,
        route="tree-search",
        partitions_scanned=scan.scanned,
        nodes=outcome.nodes,
        **stats,
    )
