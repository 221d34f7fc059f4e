"""
matching.py

Maximum-cardinality bipartite matching by augmenting paths, used for the
Hall-condition steps of the anti-Ramsey constructions.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Generic, Hashable, List, Optional, Sequence, Set, Tuple, TypeVar

logger = logging.getLogger(__name__)

X = TypeVar("X", bound=Hashable)
Y = TypeVar("Y", bound=Hashable)


@dataclass(frozen=True)
class BipartiteGraph(Generic[X, Y]):
    """
    Bipartite graph given by its two sides and a set of (left, right) edges.

    Edges only join a left vertex to a right vertex; adjacency lists keep the
    order of `right`, so matchings are deterministic.
    """
    left: Tuple[X, ...]
    right: Tuple[Y, ...]
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "edges", frozenset(self.edges))
        lefts, rights = set(self.left), set(self.right)
        for x, y in self.edges:
            if x not in lefts or y not in rights:
                raise ValueError(f"edge ({x!r}, {y!r}) does not join the two sides")

    def neighbors(self, x: X) -> List[Y]:
        return [y for y in self.right if (x, y) in self.edges]


def max_bipartite_matching(graph: BipartiteGraph) -> Dict[X, Y]:
    """
    Maximum matching, returned as a map from matched left vertices to their partners.

    Left vertices are processed in order, each one trying an augmenting path
    through the current matching.
    """
    adjacency = {x: graph.neighbors(x) for x in graph.left}
    # owner[y] = left vertex matched to y
    owner: Dict[Y, X] = {}

    def augment(x: X, seen: Set[Y]) -> bool:
        for y in adjacency[x]:
            if y in seen:
                continue
            seen.add(y)
            if y not in owner or augment(owner[y], seen):
                owner[y] = x
                return True
        return False

    for x in graph.left:
        augment(x, set())

    matching = {x: y for y, x in owner.items()}
    return {x: matching[x] for x in graph.left if x in matching}


def saturating_matching(graph: BipartiteGraph, required: Sequence[X]) -> Optional[Dict[X, Y]]:
    """Maximum matching restricted to `required`, or None if some required vertex stays unmatched."""
    wanted = set(required)
    restricted = BipartiteGraph(
        left=tuple(required),
        right=graph.right,
        edges=frozenset((x, y) for x, y in graph.edges if x in wanted),
    )
    matching = max_bipartite_matching(restricted)
    if len(matching) < len(restricted.left):
        logger.debug(f"No saturating matching: {len(matching)} of {len(restricted.left)} matched")
        return None
    return matching
