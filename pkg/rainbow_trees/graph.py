"""
graph.py

Core data model for edge-colored multigraphs, rainbow forests and vertex
partitions, plus the elementary graph operations every solver uses.

Vertices and colors are dense 0-based integers. Forests store edge indices
into the host graph, so parallel edges stay distinguishable.
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

ColorSet = FrozenSet[int]
EdgeTriple = Tuple[int, int, int]


class RainbowError(Exception):
    """Base exception for rainbow spanning tree operations"""
    pass


class GraphError(RainbowError):
    """Raised for malformed graphs, partitions or forests"""
    pass


class InvalidFamilyError(RainbowError):
    """Raised when a forest family fails validation"""

    def __init__(self, reason: str, message: Optional[str] = None):
        self.reason = reason
        super().__init__(message or f"invalid forest family: {reason}")


class DisjointMode(str, Enum):
    COLOR_DISJOINT = "color-disjoint"
    EDGE_DISJOINT = "edge-disjoint"


class DisjointSet:
    """
    Union-find over the elements 0..size-1 with path compression and union by rank.

    Examples:
        >>> ds = DisjointSet(3)
        >>> ds.merge(0, 2)
        True
        >>> ds.find(0) == ds.find(2)
        True
        >>> ds.merge(2, 0)
        False
    """

    def __init__(self, size: int):
        if size < 0:
            raise ValueError("size must be non-negative")
        self._parent = list(range(size))
        self._rank = [0] * size
        self.components = size

    def find(self, x: int) -> int:
        root = x
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[x] != root:
            self._parent[x], x = root, self._parent[x]
        return root

    def merge(self, x: int, y: int) -> bool:
        """
        Merge the sets containing x and y.

        Returns:
            True if two different sets were merged, False if x and y already shared a set
        """
        x_root, y_root = self.find(x), self.find(y)
        if x_root == y_root:
            return False
        if self._rank[x_root] < self._rank[y_root]:
            x_root, y_root = y_root, x_root
        self._parent[y_root] = x_root
        if self._rank[x_root] == self._rank[y_root]:
            self._rank[x_root] += 1
        self.components -= 1
        return True

    def labels(self) -> List[int]:
        return [self.find(x) for x in range(len(self._parent))]


@dataclass(frozen=True)
class EdgeColoredMultigraph:
    """
    Edge-colored multigraph on vertices 0..n-1.

    Edges are (u, v, color) triples; loops are rejected, parallel edges (also of
    equal color) are kept, and the palette must be dense: every color id in
    0..k-1 appears on at least one edge.
    """
    n: int
    edges: Tuple[EdgeTriple, ...]

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        object.__setattr__(self, "edges", tuple((int(u), int(v), int(c)) for u, v, c in self.edges))
        seen_colors = set()
        for index, (u, v, c) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {index} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise GraphError(f"edge {index} is a loop at vertex {u}")
            if c < 0:
                raise GraphError(f"edge {index} has negative color {c}")
            seen_colors.add(c)
        if seen_colors and seen_colors != set(range(max(seen_colors) + 1)):
            raise GraphError("palette is not dense: every color id 0..k-1 must appear")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def num_colors(self) -> int:
        return 1 + max((c for _, _, c in self.edges), default=-1)

    def color(self, edge: int) -> int:
        return self.edges[edge][2]

    def endpoints(self, edge: int) -> Tuple[int, int]:
        u, v, _ = self.edges[edge]
        return u, v

    def colors_of(self, edges: Iterable[int]) -> ColorSet:
        return frozenset(self.edges[e][2] for e in edges)

    @cached_property
    def incidence(self) -> Tuple[Tuple[int, ...], ...]:
        """Edge indices incident to each vertex, ascending."""
        incident: List[List[int]] = [[] for _ in range(self.n)]
        for index, (u, v, _) in enumerate(self.edges):
            incident[u].append(index)
            incident[v].append(index)
        return tuple(tuple(edges) for edges in incident)

    @cached_property
    def color_classes(self) -> Tuple[Tuple[int, ...], ...]:
        classes: List[List[int]] = [[] for _ in range(self.num_colors)]
        for index, (_, _, c) in enumerate(self.edges):
            classes[c].append(index)
        return tuple(tuple(edges) for edges in classes)

    def is_complete_simple(self) -> bool:
        pairs = {frozenset((u, v)) for u, v, _ in self.edges}
        return len(pairs) == len(self.edges) == self.n * (self.n - 1) // 2

    def degree(self, vertex: int, edges: Optional[Iterable[int]] = None) -> int:
        if edges is None:
            return len(self.incidence[vertex])
        return sum(1 for e in edges if vertex in self.endpoints(e))


@dataclass(frozen=True)
class VertexPartition:
    """
    Partition of 0..n-1 in restricted-growth normal form.

    assignment[0] == 0 and assignment[i] <= 1 + max(assignment[:i]), which makes
    equality of assignments coincide with equality of set partitions.
    """
    assignment: Tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(b) for b in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        highest = -1
        for vertex, block in enumerate(assignment):
            if block < 0 or block > highest + 1:
                raise GraphError(f"assignment is not a restricted-growth string at vertex {vertex}")
            highest = max(highest, block)

    @classmethod
    def from_labels(cls, labels: Sequence[object]) -> "VertexPartition":
        """Normalize arbitrary block labels (first appearance order)."""
        renumber: Dict[object, int] = {}
        return cls(tuple(renumber.setdefault(label, len(renumber)) for label in labels))

    @classmethod
    def whole(cls, n: int) -> "VertexPartition":
        return cls((0,) * n)

    @classmethod
    def singletons(cls, n: int) -> "VertexPartition":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def block_count(self) -> int:
        return 1 + max(self.assignment, default=-1)

    def blocks(self) -> List[List[int]]:
        grouped: List[List[int]] = [[] for _ in range(self.block_count)]
        for vertex, block in enumerate(self.assignment):
            grouped[block].append(vertex)
        return grouped

    def separates(self, u: int, v: int) -> bool:
        return self.assignment[u] != self.assignment[v]

    def __str__(self) -> str:
        return "|".join("".join(str(v) if v < 10 else f"({v})" for v in block) for block in self.blocks())


@dataclass(frozen=True)
class Forest:
    """Forest given by edge indices into a host graph (kept sorted)."""
    edges: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(set(int(e) for e in self.edges))))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: int) -> bool:
        return edge in self.edge_set

    def __iter__(self):
        return iter(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[int]:
        return frozenset(self.edges)

    def colors(self, graph: EdgeColoredMultigraph) -> ColorSet:
        return graph.colors_of(self.edges)

    def is_rainbow(self, graph: EdgeColoredMultigraph) -> bool:
        return len(self.colors(graph)) == len(self.edges)

    def is_acyclic(self, graph: EdgeColoredMultigraph) -> bool:
        ds = DisjointSet(graph.n)
        return all(ds.merge(*graph.endpoints(e)) for e in self.edges)

    def is_spanning_tree(self, graph: EdgeColoredMultigraph) -> bool:
        return len(self.edges) == max(graph.n - 1, 0) and self.is_acyclic(graph)

    def with_edges(self, added: Iterable[int] = (), removed: Iterable[int] = ()) -> "Forest":
        removed_set = set(removed)
        return Forest(tuple(e for e in self.edges if e not in removed_set) + tuple(added))


@dataclass(frozen=True)
class ForestFamily:
    """Ordered family F_1..F_t of rainbow spanning forests."""
    forests: Tuple[Forest, ...]
    mode: DisjointMode = DisjointMode.COLOR_DISJOINT

    def __post_init__(self):
        object.__setattr__(
            self, "forests", tuple(f if isinstance(f, Forest) else Forest(tuple(f)) for f in self.forests)
        )
        object.__setattr__(self, "mode", DisjointMode(self.mode))

    @classmethod
    def empty(cls, t: int, mode: DisjointMode = DisjointMode.COLOR_DISJOINT) -> "ForestFamily":
        return cls(tuple(Forest() for _ in range(t)), mode)

    @property
    def t(self) -> int:
        return len(self.forests)

    def __iter__(self):
        return iter(self.forests)

    def __getitem__(self, index: int) -> Forest:
        return self.forests[index]

    def total_edges(self) -> int:
        return sum(len(f) for f in self.forests)

    def edge_union(self) -> FrozenSet[int]:
        return frozenset(e for f in self.forests for e in f.edges)

    def colors(self, graph: EdgeColoredMultigraph) -> ColorSet:
        return graph.colors_of(self.edge_union())

    def replace(self, index: int, forest: Forest) -> "ForestFamily":
        forests = list(self.forests)
        forests[index] = forest
        return ForestFamily(tuple(forests), self.mode)

    def is_spanning(self, graph: EdgeColoredMultigraph) -> bool:
        return all(f.is_spanning_tree(graph) for f in self.forests)


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class RestrictedGraph:
    """G minus every edge whose color occurs in one of the given forests."""
    base: EdgeColoredMultigraph
    removed_colors: ColorSet
    edges: FrozenSet[int] = field(default_factory=frozenset)


# --------------------------------------------------------------------------------------
# Elementary operations
# --------------------------------------------------------------------------------------

def color_multiplicities(graph: EdgeColoredMultigraph) -> Dict[int, int]:
    """Number of edges carrying each color."""
    return dict(sorted(Counter(c for _, _, c in graph.edges).items()))


def _check_edges(graph: EdgeColoredMultigraph, edges: Iterable[int]) -> None:
    for e in edges:
        if not 0 <= e < graph.num_edges:
            raise GraphError(f"edge index {e} out of range 0..{graph.num_edges - 1}")


def forest_components(graph: EdgeColoredMultigraph, forest: Iterable[int]) -> VertexPartition:
    """
    Partition of the vertex set into the connected components of a forest.

    Isolated vertices are singleton blocks; the result is in restricted-growth form.

    Raises:
        GraphError: If an edge index is out of range
    """
    edges = list(forest)
    _check_edges(graph, edges)
    ds = DisjointSet(graph.n)
    for e in edges:
        ds.merge(*graph.endpoints(e))
    return VertexPartition.from_labels(ds.labels())


def fundamental_cycle(graph: EdgeColoredMultigraph, forest: Iterable[int], edge: int) -> List[int]:
    """
    Unique path of the forest between the endpoints of `edge`.

    Together with `edge` it forms the unique cycle of forest + edge. The path is
    returned in order from the first endpoint of `edge` to the second.

    Raises:
        GraphError: If `edge` is already in the forest or its endpoints lie in
            different components
    """
    edges = list(forest)
    _check_edges(graph, edges + [edge])
    if edge in edges:
        raise GraphError(f"edge {edge} already belongs to the forest")
    source, target = graph.endpoints(edge)
    adjacency: Dict[int, List[Tuple[int, int]]] = {}
    for e in edges:
        u, v = graph.endpoints(e)
        adjacency.setdefault(u, []).append((v, e))
        adjacency.setdefault(v, []).append((u, e))

    via: Dict[int, Tuple[int, int]] = {source: (source, -1)}
    queue = deque([source])
    while queue:
        vertex = queue.popleft()
        if vertex == target:
            break
        for neighbor, e in adjacency.get(vertex, ()):
            if neighbor not in via:
                via[neighbor] = (vertex, e)
                queue.append(neighbor)
    if target not in via:
        raise GraphError(f"endpoints of edge {edge} lie in different components; no cycle")

    path: List[int] = []
    vertex = target
    while vertex != source:
        vertex, e = via[vertex]
        path.append(e)
    path.reverse()
    return path


def meet_partitions(first: VertexPartition, second: VertexPartition) -> VertexPartition:
    """Coarsest common refinement: blocks are the nonempty pairwise intersections."""
    if first.n != second.n:
        raise GraphError(f"partition size mismatch: {first.n} != {second.n}")
    return VertexPartition.from_labels(list(zip(first.assignment, second.assignment)))


def validate_family(graph: EdgeColoredMultigraph, family: ForestFamily) -> FamilyCheck:
    """
    Check that every forest is acyclic and rainbow and that the family meets
    its disjointness mode. Never raises; failures carry a reason code.
    """
    used_edges: set = set()
    used_colors: set = set()
    for forest in family.forests:
        if any(not 0 <= e < graph.num_edges for e in forest.edges):
            return FamilyCheck(False, "edge-out-of-range")
        if not forest.is_acyclic(graph):
            return FamilyCheck(False, "cyclic")
        if not forest.is_rainbow(graph):
            return FamilyCheck(False, "not-rainbow")
        if used_edges & forest.edge_set:
            return FamilyCheck(False, "shared-edge")
        colors = forest.colors(graph)
        if family.mode is DisjointMode.COLOR_DISJOINT and used_colors & colors:
            return FamilyCheck(False, "shared-color")
        used_edges |= forest.edge_set
        used_colors |= colors
    return FamilyCheck(True)


def require_valid(graph: EdgeColoredMultigraph, family: ForestFamily) -> None:
    check = validate_family(graph, family)
    if not check:
        raise InvalidFamilyError(check.reason)


def restricted_graph(graph: EdgeColoredMultigraph, family: ForestFamily) -> RestrictedGraph:
    """
    Remove every edge whose color appears in some forest of the family.

    Raises:
        InvalidFamilyError: If the family is not a set of edge-disjoint rainbow forests
    """
    require_valid(graph, ForestFamily(family.forests, DisjointMode.EDGE_DISJOINT))
    removed = family.colors(graph)
    surviving = frozenset(e for e, (_, _, c) in enumerate(graph.edges) if c not in removed)
    return RestrictedGraph(base=graph, removed_colors=removed, edges=surviving)


# --------------------------------------------------------------------------------------
# Derived graphs
# --------------------------------------------------------------------------------------

def coarsen_coloring(graph: EdgeColoredMultigraph, colors: int) -> EdgeColoredMultigraph:
    """
    Merge color classes so exactly `colors` colors remain (ids >= colors-1 fold
    into colors-1). Rainbow subgraphs of the result are rainbow in the original.
    """
    if colors < 1 or colors > graph.num_colors:
        raise GraphError(f"cannot coarsen {graph.num_colors} colors to {colors}")
    cap = colors - 1
    return EdgeColoredMultigraph(graph.n, tuple((u, v, min(c, cap)) for u, v, c in graph.edges))


def induced_subgraph(
    graph: EdgeColoredMultigraph,
    keep_vertices: Sequence[int],
    drop_colors: Iterable[int] = (),
) -> Tuple[EdgeColoredMultigraph, Tuple[int, ...]]:
    """
    Subgraph on `keep_vertices` without edges of `drop_colors`, relabelled densely.

    Returns:
        The subgraph and, for each of its edges, the index of the host edge it came from
    """
    vertex_map = {v: i for i, v in enumerate(keep_vertices)}
    dropped = set(drop_colors)
    color_map: Dict[int, int] = {}
    edges: List[EdgeTriple] = []
    origin: List[int] = []
    for index, (u, v, c) in enumerate(graph.edges):
        if u in vertex_map and v in vertex_map and c not in dropped:
            edges.append((vertex_map[u], vertex_map[v], color_map.setdefault(c, len(color_map))))
            origin.append(index)
    return EdgeColoredMultigraph(len(vertex_map), tuple(edges)), tuple(origin)


def complete_graph(n: int, colors: Sequence[int]) -> EdgeColoredMultigraph:
    """K_n with edges in lexicographic (u, v) order colored by `colors`."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if len(colors) != len(pairs):
        raise GraphError(f"K_{n} has {len(pairs)} edges, got {len(colors)} colors")
    return EdgeColoredMultigraph(n, tuple((u, v, c) for (u, v), c in zip(pairs, colors)))
