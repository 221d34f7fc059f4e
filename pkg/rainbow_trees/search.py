"""
search.py

Exact backtracking over families of rainbow spanning trees.

One engine serves three questions:
    - t edge-disjoint rainbow spanning trees
    - t color-disjoint rainbow spanning trees
    - a color-disjoint extension of given forests (added edges drawn from G'
      with pairwise distinct fresh colors)

Trees are built one at a time, each by adding edges in increasing index
order. Two symmetries are broken. Interchangeable trees (no forced forests)
are kept in non-decreasing order of their smallest edge class, where the class
of an edge is the lowest index carrying the same (u, v, color) triple. Inside
a class, an edge is only taken when every lower member of its class is
already used by an earlier tree.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

from .config import settings
from .graph import (
    DisjointMode,
    DisjointSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    RainbowError,
    require_valid,
    restricted_graph,
)

logger = logging.getLogger(__name__)


class BudgetExhaustedError(RainbowError):
    """Raised when an exact search visits more nodes than its budget allows"""

    def __init__(self, budget: int, step: str = "tree search"):
        self.budget = budget
        self.step = step
        super().__init__(f"{step} exceeded its budget of {budget} nodes")


@dataclass(frozen=True)
class SearchOutcome:
    """Result of a completed search: trees, or None when proven absent."""
    trees: Optional[ForestFamily]
    nodes: int

    @property
    def found(self) -> bool:
        return self.trees is not None


@dataclass(frozen=True)
class _TreeProblem:
    graph: EdgeColoredMultigraph
    t: int
    forced: Tuple[FrozenSet[int], ...]
    pool: FrozenSet[int]
    blocked_colors: FrozenSet[int]
    color_disjoint: bool

    @property
    def interchangeable(self) -> bool:
        return not any(self.forced)


def _edge_classes(graph: EdgeColoredMultigraph) -> List[int]:
    first = {}
    classes = []
    for index, (u, v, c) in enumerate(graph.edges):
        classes.append(first.setdefault((min(u, v), max(u, v), c), index))
    return classes


class _TreeSearch:
    def __init__(self, problem: _TreeProblem, budget: int):
        self.problem = problem
        self.graph = problem.graph
        self.budget = budget
        self.nodes = 0
        self.classes = _edge_classes(self.graph)
        self.used = [False] * self.graph.num_edges
        for forced in problem.forced:
            for e in forced:
                self.used[e] = True
        self.added_colors: set = set()
        self.trees: List[List[int]] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExhaustedError(self.budget)

    def _usable(self, e: int, tree_colors: set) -> bool:
        if self.used[e] or e not in self.problem.pool:
            return False
        c = self.graph.color(e)
        if c in tree_colors:
            return False
        if self.problem.color_disjoint and (c in self.problem.blocked_colors or c in self.added_colors):
            return False
        return True

    def _has_free_lower_twin(self, e: int) -> bool:
        """True if a lower edge with the same triple is still unused."""
        cls = self.classes[e]
        return any(
            self.classes[other] == cls and not self.used[other]
            for other in range(cls, e)
        )

    def _connectable(self, labels: List[int], start: int, tree_colors: set) -> bool:
        ds = DisjointSet(self.graph.n)
        for v, label in enumerate(labels):
            ds.merge(v, label)
        for e in range(start, self.graph.num_edges):
            if self._usable(e, tree_colors):
                ds.merge(*self.graph.endpoints(e))
        return ds.components == 1

    def run(self) -> bool:
        return self._build(0, 0)

    def _build(self, index: int, lower_key: int) -> bool:
        if index == self.problem.t:
            return True
        forced = sorted(self.problem.forced[index])
        ds = DisjointSet(self.graph.n)
        for e in forced:
            ds.merge(*self.graph.endpoints(e))
        labels = ds.labels()
        tree_colors = set(self.graph.colors_of(forced))
        need = max(self.graph.n - 1, 0) - len(forced)
        return self._grow(index, lower_key, 0, labels, list(forced), tree_colors, need)

    def _grow(
        self,
        index: int,
        lower_key: int,
        start: int,
        labels: List[int],
        chosen: List[int],
        tree_colors: set,
        need: int,
    ) -> bool:
        self._tick()
        if need == 0:
            self.trees.append(list(chosen))
            key = min((self.classes[e] for e in chosen), default=lower_key)
            if self._build(index + 1, key if self.problem.interchangeable else 0):
                return True
            self.trees.pop()
            return False
        if not self._connectable(labels, start, tree_colors):
            return False

        for e in range(start, self.graph.num_edges):
            if not self._usable(e, tree_colors):
                continue
            if self.problem.interchangeable and self.classes[e] < lower_key:
                continue
            u, v = self.graph.endpoints(e)
            if labels[u] == labels[v]:
                continue
            if self._has_free_lower_twin(e):
                continue
            c = self.graph.color(e)
            old, new = labels[v], labels[u]
            merged = [new if label == old else label for label in labels]
            self.used[e] = True
            tree_colors.add(c)
            if self.problem.color_disjoint:
                self.added_colors.add(c)
            chosen.append(e)
            found = self._grow(index, lower_key, e + 1, merged, chosen, tree_colors, need - 1)
            chosen.pop()
            if self.problem.color_disjoint:
                self.added_colors.discard(c)
            tree_colors.discard(c)
            self.used[e] = False
            if found:
                return True
        return False


def _run(problem: _TreeProblem, mode: DisjointMode, budget: Optional[int]) -> SearchOutcome:
    budget = settings.search.budget if budget is None else budget
    graph = problem.graph
    if problem.t == 0:
        return SearchOutcome(ForestFamily.empty(0, mode), 0)
    if graph.n <= 1:
        return SearchOutcome(ForestFamily(tuple(Forest(tuple(f)) for f in problem.forced), mode), 0)
    needed = problem.t * (graph.n - 1) - sum(len(f) for f in problem.forced)
    if needed > len(problem.pool):
        return SearchOutcome(None, 0)

    search = _TreeSearch(problem, budget)
    if search.run():
        family = ForestFamily(tuple(Forest(tuple(tree)) for tree in search.trees), mode)
        logger.debug(f"Tree search found {problem.t} trees after {search.nodes} nodes")
        return SearchOutcome(family, search.nodes)
    logger.debug(f"Tree search proved absence after {search.nodes} nodes")
    return SearchOutcome(None, search.nodes)


def exhaustive_edge_disjoint_search(
    graph: EdgeColoredMultigraph,
    t: int,
    budget: Optional[int] = None,
) -> SearchOutcome:
    """
    Decide whether `graph` has t edge-disjoint rainbow spanning trees.

    Raises:
        BudgetExhaustedError: If the search needs more than `budget` nodes
    """
    problem = _TreeProblem(
        graph=graph,
        t=t,
        forced=tuple(frozenset() for _ in range(t)),
        pool=frozenset(range(graph.num_edges)),
        blocked_colors=frozenset(),
        color_disjoint=False,
    )
    return _run(problem, DisjointMode.EDGE_DISJOINT, budget)


def exhaustive_color_disjoint_search(
    graph: EdgeColoredMultigraph,
    t: int,
    budget: Optional[int] = None,
) -> SearchOutcome:
    """
    Decide whether `graph` has t color-disjoint rainbow spanning trees.

    Raises:
        BudgetExhaustedError: If the search needs more than `budget` nodes
    """
    problem = _TreeProblem(
        graph=graph,
        t=t,
        forced=tuple(frozenset() for _ in range(t)),
        pool=frozenset(range(graph.num_edges)),
        blocked_colors=frozenset(),
        color_disjoint=True,
    )
    return _run(problem, DisjointMode.COLOR_DISJOINT, budget)


def exhaustive_extension_search(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    budget: Optional[int] = None,
) -> SearchOutcome:
    """
    Decide whether the forests extend to edge-disjoint rainbow spanning trees
    whose added edges come from G' and carry pairwise distinct colors.

    Raises:
        InvalidFamilyError: If the forests are not edge-disjoint rainbow forests
        BudgetExhaustedError: If the search needs more than `budget` nodes
    """
    require_valid(graph, ForestFamily(family.forests, DisjointMode.EDGE_DISJOINT))
    restricted = restricted_graph(graph, family)
    problem = _TreeProblem(
        graph=graph,
        t=family.t,
        forced=tuple(f.edge_set for f in family.forests),
        pool=restricted.edges,
        blocked_colors=restricted.removed_colors,
        color_disjoint=True,
    )
    return _run(problem, family.mode, budget)
