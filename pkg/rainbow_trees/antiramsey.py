"""
antiramsey.py

Edge-disjoint rainbow spanning trees in colored complete graphs.

Contains the anti-Ramsey value r(n, t) (the largest number of colors a
coloring of K_n can use without t edge-disjoint rainbow spanning trees), the
constructions that extract t trees from any coloring of K_n with more colors
than r(n, t), and the dispatcher that runs them or falls back to exact search.

Pipelines:
    - n = 2t+1: forests from the repeated colors, then a color-disjoint extension
    - n = 2t+2: forests from the forest lemma, then a color-disjoint extension
    - n >= 2t+3: induction on n down to n = 2t+2

A construction that receives more colors than its threshold first merges
color classes down to exactly the threshold; trees rainbow in the merged
coloring are rainbow in the original.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .cdrst import solve_color_disjoint
from .dumps import fail
from .extension import extend_to_trees
from .graph import (
    ColorSet,
    DisjointMode,
    DisjointSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    RainbowError,
    coarsen_coloring,
    induced_subgraph,
    validate_family,
)
from .matching import BipartiteGraph, max_bipartite_matching, saturating_matching
from .search import exhaustive_edge_disjoint_search

logger = logging.getLogger(__name__)


class PreconditionError(RainbowError):
    """Raised when a construction's hypotheses do not hold"""

    def __init__(self, hypothesis: str):
        self.hypothesis = hypothesis
        super().__init__(f"precondition failed: {hypothesis}")


# --------------------------------------------------------------------------------------
# Thresholds
# --------------------------------------------------------------------------------------

def r_formula(n: int, t: int) -> int:
    """
    r(n, t) for n >= 2t >= 2:
        C(n-2, 2) + t   when n >= 2t+2
        C(n-1, 2)       when n = 2t+1
        C(n, 2) - t     when n = 2t

    Raises:
        PreconditionError: If t < 1 or n < 2t (too few edges for t spanning trees)
    """
    if t < 1:
        raise PreconditionError("t >= 1")
    if n < 2 * t:
        raise PreconditionError(f"n >= 2t (K_{n} has too few edges for {t} spanning trees)")
    if n >= 2 * t + 2:
        return comb(n - 2, 2) + t
    if n == 2 * t + 1:
        return comb(n - 1, 2)
    return comb(n, 2) - t


def _require_complete(graph: EdgeColoredMultigraph) -> None:
    if not graph.is_complete_simple():
        raise PreconditionError("graph is a simple complete graph")


def _require_colors(graph: EdgeColoredMultigraph, threshold: int) -> EdgeColoredMultigraph:
    if graph.num_colors < threshold:
        raise PreconditionError(f"at least {threshold} colors (got {graph.num_colors})")
    return coarsen_coloring(graph, threshold)


def _require_trees(graph: EdgeColoredMultigraph, trees: ForestFamily, t: int, step: str) -> ForestFamily:
    family = ForestFamily(trees.forests, DisjointMode.EDGE_DISJOINT)
    if family.t != t or not validate_family(graph, family) or not family.is_spanning(graph):
        raise fail(step, graph, f"t={t}: construction returned an invalid tree family")
    return family


# --------------------------------------------------------------------------------------
# Color multiplicities
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicitySplit:
    """Edges of repeated colors (g1) and of unique colors (g2)."""
    g1: FrozenSet[int]
    g2: FrozenSet[int]
    colors: Tuple[int, ...]
    histogram: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.colors)

    @property
    def excess(self) -> int:
        return sum(m - 1 for m in self.histogram)


def split_by_multiplicity(graph: EdgeColoredMultigraph, edges: Optional[Iterable[int]] = None) -> MultiplicitySplit:
    """Repeated colors are listed by multiplicity (largest first), then color id."""
    edges = sorted(range(graph.num_edges) if edges is None else edges)
    counts = Counter(graph.color(e) for e in edges)
    repeated = sorted((c for c, m in counts.items() if m >= 2), key=lambda c: (-counts[c], c))
    repeated_set = set(repeated)
    return MultiplicitySplit(
        g1=frozenset(e for e in edges if graph.color(e) in repeated_set),
        g2=frozenset(e for e in edges if graph.color(e) not in repeated_set),
        colors=tuple(repeated),
        histogram=tuple(counts[c] for c in repeated),
    )


@dataclass(frozen=True)
class LeftoverReport:
    """Edges of G1 left outside the forests."""
    edges: FrozenSet[int]
    max_degree: int
    edge_count: int


def leftover_report(graph: EdgeColoredMultigraph, edges: Iterable[int]) -> LeftoverReport:
    edges = frozenset(edges)
    degrees = _degrees(graph, edges)
    return LeftoverReport(edges=edges, max_degree=max(degrees.values(), default=0), edge_count=len(edges))


def _degrees(graph: EdgeColoredMultigraph, edges: Iterable[int]) -> Counter:
    degrees: Counter = Counter()
    for e in edges:
        u, v = graph.endpoints(e)
        degrees[u] += 1
        degrees[v] += 1
    return degrees


# --------------------------------------------------------------------------------------
# Forest lemma
# --------------------------------------------------------------------------------------

def _greedy_pick(
    graph: EdgeColoredMultigraph,
    remaining: Iterable[int],
    eligible: Callable[[int], bool],
    degree_of: Callable[[int], int],
) -> Optional[int]:
    """
    Edge at a vertex of largest degree among vertices with an eligible edge;
    among that vertex's eligible edges the one whose other end has largest
    degree. Ties go to the lower vertex id, then the lower edge index.
    """
    candidates = sorted(e for e in remaining if eligible(e))
    if not candidates:
        return None
    touched = sorted({v for e in candidates for v in graph.endpoints(e)})
    vertex = max(touched, key=lambda v: (degree_of(v), -v))
    at_vertex = [e for e in candidates if vertex in graph.endpoints(e)]

    def other_end(e: int) -> int:
        u, v = graph.endpoints(e)
        return v if u == vertex else u

    return max(at_vertex, key=lambda e: (degree_of(other_end(e)), -e))


def _lemma_hypotheses(graph: EdgeColoredMultigraph, t: int, edges: Sequence[int]) -> MultiplicitySplit:
    if t < 3:
        raise PreconditionError("t >= 3")
    if graph.n != 2 * t + 2:
        raise PreconditionError(f"n = 2t+2 = {2 * t + 2} (got {graph.n})")
    pairs = [frozenset(graph.endpoints(e)) for e in edges]
    if len(set(pairs)) != len(pairs):
        raise PreconditionError("the graph is simple")
    split = split_by_multiplicity(graph, edges)
    if split.g2:
        raise PreconditionError("every color has multiplicity at least 2")
    if split.excess != 3 * t:
        raise PreconditionError(f"sum of (m_i - 1) equals 3t = {3 * t} (got {split.excess})")
    return split


def _complete_greedily(graph: EdgeColoredMultigraph, forests: List[List[int]], remaining: set) -> None:
    """Make the family edge-maximal: add leftover edges wherever they keep a rainbow forest."""
    for e in sorted(remaining):
        c = graph.color(e)
        for forest in forests:
            if c in graph.colors_of(forest):
                continue
            ds = DisjointSet(graph.n)
            for f in forest:
                ds.merge(*graph.endpoints(f))
            if ds.merge(*graph.endpoints(e)):
                forest.append(e)
                remaining.discard(e)
                break


def _complete_balanced(graph: EdgeColoredMultigraph, forests: List[List[int]], remaining: set) -> None:
    """Edge-maximal completion that offers each leftover edge to the smallest forests first."""
    components = []
    for forest in forests:
        ds = DisjointSet(graph.n)
        for f in forest:
            ds.merge(*graph.endpoints(f))
        components.append(ds)
    for e in sorted(remaining):
        c = graph.color(e)
        u, v = graph.endpoints(e)
        for j in sorted(range(len(forests)), key=lambda j: (len(forests[j]), j)):
            if c in graph.colors_of(forests[j]) or components[j].find(u) == components[j].find(v):
                continue
            components[j].merge(u, v)
            forests[j].append(e)
            remaining.discard(e)
            break


def lemma1_forests(
    graph: EdgeColoredMultigraph,
    t: int,
    edges: Optional[Iterable[int]] = None,
) -> Tuple[ForestFamily, LeftoverReport]:
    """
    Build t edge-disjoint rainbow forests in the subgraph given by `edges`
    (all edges by default) leaving at most 2t+1 edges, of maximum degree at
    most t+1, outside the forests.

    Hypotheses: n = 2t+2, t >= 3, the subgraph is simple, every color occurs at
    least twice and the multiplicities satisfy sum(m_i - 1) = 3t.

    When the most frequent color c_1 has at least 2t+2 edges, the forests take
    t edges of c_1 from the vertices of largest c_1-degree, then t edges of
    other colors from the vertices of largest degree. Otherwise step j covers
    every vertex of current degree 2t+2-j by a rainbow edge set chosen through
    a vertex-color matching, and the family is finally made edge-maximal.

    Raises:
        PreconditionError: If a hypothesis fails
        InternalFailure: If the leftover bounds are not met
    """
    edges = sorted(range(graph.num_edges) if edges is None else edges)
    split = _lemma_hypotheses(graph, t, edges)
    remaining = set(edges)
    forests: List[List[int]] = [[] for _ in range(t)]
    top = split.colors[0]

    if split.histogram[0] >= 2 * t + 2:
        logger.debug(f"Forest lemma: color {top} has {split.histogram[0]} edges, two greedy rounds")
        for i in range(t):
            top_degrees = _degrees(graph, (e for e in remaining if graph.color(e) == top))
            e = _greedy_pick(graph, remaining, lambda e: graph.color(e) == top, lambda v: top_degrees[v])
            forests[i].append(e)
            remaining.discard(e)
        for i in range(t):
            degrees = _degrees(graph, remaining)
            e = _greedy_pick(graph, remaining, lambda e: graph.color(e) != top, lambda v: degrees[v])
            if e is None:
                break
            forests[i].append(e)
            remaining.discard(e)
    else:
        logger.debug(f"Forest lemma: largest multiplicity {split.histogram[0]}, matching steps")
        for j in range(1, t + 1):
            degrees = _degrees(graph, remaining)
            target = 2 * t + 2 - j
            covered = sorted(v for v in range(graph.n) if degrees[v] >= target)
            if not covered:
                e = _greedy_pick(graph, remaining, lambda e: True, lambda v: degrees[v])
                if e is not None:
                    forests[j - 1].append(e)
                    remaining.discard(e)
                continue
            incident = sorted({(v, graph.color(e)) for e in remaining for v in graph.endpoints(e) if v in covered})
            auxiliary = BipartiteGraph(
                left=tuple(covered),
                right=tuple(sorted({c for _, c in incident})),
                edges=frozenset(incident),
            )
            matching = saturating_matching(auxiliary, covered)
            if matching is None:
                raise fail("lemma-matching", graph, f"t={t} step {j}: no matching saturates {covered}")
            ds = DisjointSet(graph.n)
            for v in covered:
                e = min(e for e in remaining if v in graph.endpoints(e) and graph.color(e) == matching[v])
                if e not in forests[j - 1] and ds.merge(*graph.endpoints(e)):
                    forests[j - 1].append(e)
            remaining -= set(forests[j - 1])
        _complete_greedily(graph, forests, remaining)

    family = ForestFamily(tuple(Forest(tuple(f)) for f in forests), DisjointMode.EDGE_DISJOINT)
    if not validate_family(graph, family):
        raise fail("lemma-forests", graph, f"t={t}: forests are not edge-disjoint rainbow forests")
    report = leftover_report(graph, remaining)
    if report.edge_count > 2 * t + 1 or report.max_degree > t + 1:
        raise fail(
            "lemma-bounds",
            graph,
            f"t={t}: leftover has {report.edge_count} edges and maximum degree {report.max_degree}",
        )
    return family, report


# --------------------------------------------------------------------------------------
# n = 2t+2 and n = 2t+1
# --------------------------------------------------------------------------------------

def base_case_n2t2(graph: EdgeColoredMultigraph, t: int) -> ForestFamily:
    """
    t edge-disjoint rainbow spanning trees in a coloring of K_{2t+2} with at
    least 2t^2+1 colors: forest lemma on the repeated colors, then a
    color-disjoint extension.

    Raises:
        PreconditionError: If the graph is not such a coloring or t < 3
        InternalFailure: If a guaranteed step fails
    """
    _require_complete(graph)
    if t < 3:
        raise PreconditionError("t >= 3")
    if graph.n != 2 * t + 2:
        raise PreconditionError(f"n = 2t+2 = {2 * t + 2} (got {graph.n})")
    coarse = _require_colors(graph, 2 * t * t + 1)

    split = split_by_multiplicity(coarse)
    family, report = lemma1_forests(coarse, t, split.g1)
    logger.info(f"n=2t+2 pipeline: forests hold {family.total_edges()} edges, {report.edge_count} left over")
    return _extend_or_search(graph, coarse, family, "base-case")


def _n2t1_forests(graph: EdgeColoredMultigraph, t: int, split: MultiplicitySplit) -> Tuple[List[List[int]], set]:
    forests: List[List[int]] = [[] for _ in range(t)]
    remaining = set(split.g1)
    if split.s and split.histogram[0] >= t + 2:
        top = split.colors[0]
        for forest, e in zip(forests, graph.color_classes[top][:t]):
            forest.append(e)
            remaining.discard(e)
        for forest, c in zip(forests, split.colors[1:]):
            e = graph.color_classes[c][0]
            forest.append(e)
            remaining.discard(e)
    else:
        _complete_balanced(graph, forests, remaining)
    return forests, remaining


def _extend_or_search(
    graph: EdgeColoredMultigraph,
    coarse: EdgeColoredMultigraph,
    family: ForestFamily,
    step: str,
) -> ForestFamily:
    t = family.t
    certificate = extend_to_trees(coarse, family)
    if certificate.found:
        return _require_trees(graph, certificate.trees, t, f"{step}-trees")
    logger.warning(f"Forests of the {step} pipeline do not extend; falling back to exhaustive tree search")
    outcome = exhaustive_edge_disjoint_search(coarse, t)
    if outcome.trees is None:
        raise fail(f"{step}-extension", coarse, f"t={t}: forests do not extend and tree search found nothing")
    return _require_trees(graph, outcome.trees, t, f"{step}-trees")


def solver_n2t1(graph: EdgeColoredMultigraph, t: int) -> ForestFamily:
    """
    t edge-disjoint rainbow spanning trees in a coloring of K_{2t+1} with at
    least 2t^2-t+1 colors.

    If the most frequent color has at least t+2 edges each forest gets one of
    its edges and the other repeated colors go to distinct forests; otherwise
    the forests are an edge-maximal family in the repeated colors. Either way
    at most t repeated-color edges stay outside, and the forests extend.

    Raises:
        PreconditionError: If the graph is not such a coloring or t < 1
        InternalFailure: If a guaranteed step fails
    """
    _require_complete(graph)
    if t < 1:
        raise PreconditionError("t >= 1")
    if graph.n != 2 * t + 1:
        raise PreconditionError(f"n = 2t+1 = {2 * t + 1} (got {graph.n})")
    coarse = _require_colors(graph, 2 * t * t - t + 1)

    split = split_by_multiplicity(coarse)
    forests, remaining = _n2t1_forests(coarse, t, split)
    family = ForestFamily(tuple(Forest(tuple(f)) for f in forests), DisjointMode.EDGE_DISJOINT)
    if not validate_family(coarse, family) or len(remaining) > t:
        raise fail("n2t1-forests", coarse, f"t={t}: {len(remaining)} repeated-color edges left over")
    logger.info(f"n=2t+1 pipeline: forests hold {family.total_edges()} edges, {len(remaining)} left over")
    return _extend_or_search(graph, coarse, family, "n2t1")


# --------------------------------------------------------------------------------------
# n >= 2t+3
# --------------------------------------------------------------------------------------

def dominated_colors(graph: EdgeColoredMultigraph, vertex: int) -> ColorSet:
    """Colors all of whose edges are incident to `vertex`."""
    return frozenset(
        c for c, members in enumerate(graph.color_classes)
        if all(vertex in graph.endpoints(e) for e in members)
    )


def gamma(graph: EdgeColoredMultigraph, vertex: int, colors: Optional[Iterable[int]] = None) -> Tuple[int, ...]:
    """Edges at `vertex` with a color in `colors` (the dominated colors by default)."""
    colors = dominated_colors(graph, vertex) if colors is None else frozenset(colors)
    return tuple(e for e in graph.incidence[vertex] if graph.color(e) in colors)


def case_one_vertex(graph: EdgeColoredMultigraph, t: int) -> Optional[int]:
    """Lowest vertex v with |gamma(v)| >= t and at most n-3 dominated colors."""
    for v in range(graph.n):
        dominated = dominated_colors(graph, v)
        if len(dominated) <= graph.n - 3 and len(gamma(graph, v, dominated)) >= t:
            return v
    return None


def induction_step(graph: EdgeColoredMultigraph, t: int) -> ForestFamily:
    """
    t edge-disjoint rainbow spanning trees in a coloring of K_n, n >= 2t+3,
    with at least C(n-2, 2)+t+1 colors.

    Case 1: some vertex v has t edges in dominated colors and at most n-3
    dominated colors. Trees of K_n - v (recursively) each gain one of those
    edges.

    Case 2: two vertices v1, v2 have fewer than t such edges. Their dominated
    colors grow into a set S; color-disjoint trees of K_n - {v1, v2} without
    S-colored edges are joined to v1 and v2 by pairs of differently colored
    S-edges taken from a matching.

    Raises:
        PreconditionError: If the graph is not such a coloring or t < 3
        InternalFailure: If a guaranteed step fails
    """
    _require_complete(graph)
    n = graph.n
    if t < 3:
        raise PreconditionError("t >= 3")
    if n < 2 * t + 3:
        raise PreconditionError(f"n >= 2t+3 = {2 * t + 3} (got {n})")
    coarse = _require_colors(graph, comb(n - 2, 2) + t + 1)

    v = case_one_vertex(coarse, t)
    if v is not None:
        trees = _lift_vertex(coarse, t, v)
    else:
        trees = _join_two_vertices(coarse, t)
    return _require_trees(graph, trees, t, "induction-trees")


def _lift_vertex(graph: EdgeColoredMultigraph, t: int, vertex: int) -> ForestFamily:
    attach = gamma(graph, vertex)
    rest = [u for u in range(graph.n) if u != vertex]
    sub, origin = induced_subgraph(graph, rest)
    logger.debug(f"Induction case 1 at vertex {vertex}: recursing on K_{sub.n}")
    try:
        if sub.n == 2 * t + 2:
            inner = base_case_n2t2(sub, t)
        else:
            inner = induction_step(sub, t)
    except PreconditionError as e:
        raise fail("induction-case-1", graph, f"t={t} vertex {vertex}: {e}")
    forests = [
        Forest(tuple(origin[e] for e in tree.edges) + (attach[i],))
        for i, tree in enumerate(inner.forests)
    ]
    return ForestFamily(tuple(forests), DisjointMode.EDGE_DISJOINT)


def _grow_colors(graph: EdgeColoredMultigraph, t: int, first: int, second: int) -> FrozenSet[int]:
    """Dominated colors of both vertices, plus the lowest further colors needed for the degree thresholds."""
    chosen = set(dominated_colors(graph, first) | dominated_colors(graph, second))
    at_first = graph.colors_of(graph.incidence[first])
    at_second = graph.colors_of(graph.incidence[second])
    for c in sorted(at_second):
        if len(gamma(graph, second, chosen)) >= t + 1:
            break
        chosen.add(c)
    for c in sorted(at_first):
        if len(gamma(graph, first, chosen)) >= t:
            break
        chosen.add(c)
    for c in range(graph.num_colors):
        if len(chosen) >= t + 1:
            break
        chosen.add(c)
    return frozenset(chosen)


def _join_two_vertices(graph: EdgeColoredMultigraph, t: int) -> ForestFamily:
    n = graph.n
    low = [v for v in range(n) if len(gamma(graph, v)) <= t - 1]
    if len(low) < 2:
        raise fail("induction-case-2", graph, f"t={t}: fewer than two vertices with small gamma")
    first, second = low[0], low[1]
    palette = _grow_colors(graph, t, first, second)
    if not (t + 1 <= len(palette) <= min(2 * t + 1, n - 2)):
        raise fail("induction-palette", graph, f"t={t}: grown color set has {len(palette)} colors")
    logger.debug(f"Induction case 2 at vertices {first}, {second} with {len(palette)} reserved colors")

    rest = [u for u in range(n) if u not in (first, second)]
    sub, origin = induced_subgraph(graph, rest, drop_colors=palette)
    certificate = solve_color_disjoint(sub, t)
    if not certificate.found:
        raise fail("induction-inner-trees", graph, f"t={t}: no color-disjoint trees after removing two vertices")

    left = gamma(graph, first, palette)
    right = tuple(e for e in gamma(graph, second, palette) if first not in graph.endpoints(e))
    auxiliary = BipartiteGraph(
        left=left,
        right=right,
        edges=frozenset((a, b) for a in left for b in right if graph.color(a) != graph.color(b)),
    )
    matching = max_bipartite_matching(auxiliary)
    if len(matching) < t:
        raise fail("induction-matching", graph, f"t={t}: matching has only {len(matching)} pairs")
    pairs = list(matching.items())[:t]
    forests = [
        Forest(tuple(origin[e] for e in tree.edges) + pair)
        for tree, pair in zip(certificate.trees.forests, pairs)
    ]
    return ForestFamily(tuple(forests), DisjointMode.EDGE_DISJOINT)


# --------------------------------------------------------------------------------------
# Dispatcher
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeDisjointResult:
    """Trees with the route that produced them, or trees=None when proven absent."""
    trees: Optional[ForestFamily]
    route: str
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.trees is not None


def pipeline_for(graph: EdgeColoredMultigraph, t: int) -> Optional[str]:
    """Name of the construction whose hypotheses the graph meets, if any."""
    if t < 3 or not graph.is_complete_simple():
        return None
    n, k = graph.n, graph.num_colors
    if n == 2 * t + 1 and k >= 2 * t * t - t + 1:
        return "n=2t+1"
    if n == 2 * t + 2 and k >= 2 * t * t + 1:
        return "n=2t+2"
    if n >= 2 * t + 3 and k >= comb(n - 2, 2) + t + 1:
        return "n>=2t+3"
    return None


_PIPELINES: Dict[str, Callable[[EdgeColoredMultigraph, int], ForestFamily]] = {
    "n=2t+1": solver_n2t1,
    "n=2t+2": base_case_n2t2,
    "n>=2t+3": induction_step,
}


def solve_edge_disjoint_rst(
    graph: EdgeColoredMultigraph,
    t: int,
    budget: Optional[int] = None,
) -> EdgeDisjointResult:
    """
    t edge-disjoint rainbow spanning trees: a construction when the graph is a
    complete graph with enough colors and t >= 3, exact search otherwise.

    Raises:
        BudgetExhaustedError: If the exact search runs out of budget
        InternalFailure: If a construction fails a guaranteed step
    """
    route = pipeline_for(graph, t)
    if route is not None:
        logger.info(f"Using the {route} construction for t={t}, n={graph.n}, {graph.num_colors} colors")
        return EdgeDisjointResult(trees=_PIPELINES[route](graph, t), route=route)

    outcome = exhaustive_edge_disjoint_search(graph, t, budget)
    if outcome.trees is not None:
        _require_trees(graph, outcome.trees, t, "exhaustive-trees")
    return EdgeDisjointResult(trees=outcome.trees, route="exhaustive", nodes=outcome.nodes)
