"""
partitions.py

Vertex-partition enumeration, crossing edges and colors, and the search for
partitions violating the color-disjoint tree condition or the extension
condition.

Partitions are produced as restricted-growth strings in lexicographic order;
the reported violation is always the first one in that order, whatever the
number of workers.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

from .config import settings
from .graph import (
    ColorSet,
    EdgeColoredMultigraph,
    ForestFamily,
    RainbowError,
    VertexPartition,
    restricted_graph,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class PartitionError(RainbowError):
    """Raised for invalid partition arguments"""
    pass


# --------------------------------------------------------------------------------------
# Enumeration
# --------------------------------------------------------------------------------------

def iter_restricted_growth(
    length: int,
    max_blocks: Optional[int] = None,
    exact_blocks: Optional[int] = None,
    prefix: Sequence[int] = (),
) -> Iterator[Tuple[int, ...]]:
    """
    Yield restricted-growth strings of the given length in lexicographic order.

    Args:
        length: String length (the size of the ground set)
        max_blocks: Skip strings using more blocks than this
        exact_blocks: Only yield strings using exactly this many blocks
        prefix: Only yield strings extending this (already restricted-growth) prefix
    """
    cap = length if max_blocks is None else max_blocks
    if exact_blocks is not None:
        cap = min(cap, exact_blocks)
    word = list(prefix)
    if len(word) > length:
        return
    used = 1 + max(word, default=-1)
    if used > cap:
        return

    def extend(position: int, used: int) -> Iterator[Tuple[int, ...]]:
        remaining = length - position
        if exact_blocks is not None and used + remaining < exact_blocks:
            return
        if remaining == 0:
            yield tuple(word)
            return
        for block in range(min(used + 1, cap)):
            word.append(block)
            yield from extend(position + 1, max(used, block + 1))
            word.pop()

    if length == 0:
        yield ()
        return
    if not word:
        word.append(0)
        yield from extend(1, 1)
    else:
        yield from extend(len(word), used)


class PartitionStream:
    """
    Iterator over all set partitions of 0..n-1, each exactly once.

    Uncapped, the stream has Bell(n) elements.
    """

    def __init__(self, n: int, max_blocks: Optional[int] = None):
        if n < 0:
            raise PartitionError("n must be non-negative")
        self.n = n
        self.max_blocks = max_blocks

    def __iter__(self) -> Iterator[VertexPartition]:
        for word in iter_restricted_growth(self.n, max_blocks=self.max_blocks):
            yield VertexPartition(word)

    def count(self) -> int:
        return sum(1 for _ in iter_restricted_growth(self.n, max_blocks=self.max_blocks))


def bell_number(n: int) -> int:
    """Bell numbers via the Bell triangle."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for value in row:
            nxt.append(nxt[-1] + value)
        row = nxt
    return row[0]


def run_shards(fn: Callable[[T], R], shards: Sequence[T], workers: int) -> List[R]:
    """Map `fn` over shards, in order; a process pool is used when workers > 1."""
    if workers <= 1 or len(shards) <= 1:
        return [fn(shard) for shard in shards]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, shards))


# --------------------------------------------------------------------------------------
# Crossing edges and deficiencies
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Deficiency:
    """How far a partition is from satisfying a condition: value = required - achieved."""
    partition: VertexPartition
    required: int
    achieved: int
    mode: str = "color-disjoint"

    @property
    def value(self) -> int:
        return self.required - self.achieved

    @property
    def violated(self) -> bool:
        return self.value >= 1


def _check_partition(graph: EdgeColoredMultigraph, partition: VertexPartition) -> None:
    if partition.n != graph.n:
        raise PartitionError(f"partition covers {partition.n} vertices, graph has {graph.n}")


def crossing_edges(
    partition: VertexPartition,
    subgraph: Optional[Iterable[int]],
    graph: EdgeColoredMultigraph,
) -> FrozenSet[int]:
    """Edges of `subgraph` (all edges when None) whose endpoints lie in different blocks."""
    _check_partition(graph, partition)
    candidates = range(graph.num_edges) if subgraph is None else subgraph
    return frozenset(e for e in candidates if partition.separates(*graph.endpoints(e)))


def crossing_colors(
    partition: VertexPartition,
    subgraph: Optional[Iterable[int]],
    graph: EdgeColoredMultigraph,
) -> ColorSet:
    return graph.colors_of(crossing_edges(partition, subgraph, graph))


def deficiency_cd(graph: EdgeColoredMultigraph, partition: VertexPartition, t: int) -> Deficiency:
    """
    Score a partition against the color-disjoint tree condition
    |c(cr(P))| >= t(|P| - 1).

    Raises:
        PartitionError: If |P| < 2 or the partition does not fit the graph
    """
    _check_partition(graph, partition)
    if partition.block_count < 2:
        raise PartitionError("deficiency needs a partition with at least two blocks")
    return Deficiency(
        partition=partition,
        required=t * (partition.block_count - 1),
        achieved=len(crossing_colors(partition, None, graph)),
        mode="color-disjoint",
    )


def deficiency_ext(
    graph: EdgeColoredMultigraph,
    family: ForestFamily,
    partition: VertexPartition,
    t: Optional[int] = None,
) -> Deficiency:
    """
    Score a partition against the extension condition
    |c(cr(P, G'))| + sum_i |cr(P, F_i)| >= t(|P| - 1).

    Forest terms count crossing edges, not colors. G' is computed internally.

    Raises:
        InvalidFamilyError: If the family is not edge-disjoint rainbow forests
        PartitionError: If |P| < 2 or the partition does not fit the graph
    """
    _check_partition(graph, partition)
    if partition.block_count < 2:
        raise PartitionError("deficiency needs a partition with at least two blocks")
    t = family.t if t is None else t
    restricted = restricted_graph(graph, family)
    achieved = len(crossing_colors(partition, restricted.edges, graph))
    achieved += sum(len(crossing_edges(partition, forest.edges, graph)) for forest in family.forests)
    return Deficiency(
        partition=partition,
        required=t * (partition.block_count - 1),
        achieved=achieved,
        mode="extension",
    )


# --------------------------------------------------------------------------------------
# Violation search
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanResult:
    violation: Optional[Deficiency]
    scanned: int


@dataclass(frozen=True)
class _ScanProblem:
    n: int
    t: int
    colors: int
    # back[i]: (j, color, is_forest_edge) for every counted edge ij with j < i
    back: Tuple[Tuple[Tuple[int, int, bool], ...], ...]
    mode: str
    pruning: bool


def _build_problem(
    graph: EdgeColoredMultigraph,
    t: int,
    family: Optional[ForestFamily],
    pruning: bool,
) -> _ScanProblem:
    back: List[List[Tuple[int, int, bool]]] = [[] for _ in range(graph.n)]
    if family is None:
        counted = [(e, False) for e in range(graph.num_edges)]
        mode = "color-disjoint"
    else:
        restricted = restricted_graph(graph, family)
        counted = [(e, False) for e in sorted(restricted.edges)]
        counted += [(e, True) for forest in family.forests for e in forest.edges]
        mode = "extension"
    for e, is_forest in counted:
        u, v, c = graph.edges[e]
        low, high = min(u, v), max(u, v)
        back[high].append((low, c, is_forest))
    return _ScanProblem(
        n=graph.n,
        t=t,
        colors=graph.num_colors,
        back=tuple(tuple(b) for b in back),
        mode=mode,
        pruning=pruning,
    )


def _scan_shard(job: Tuple[_ScanProblem, Tuple[int, ...]]) -> Tuple[Optional[Tuple[int, ...]], int, int, int]:
    """Depth-first scan of every partition extending `prefix`; stops at the first violation."""
    problem, prefix = job
    n, t = problem.n, problem.t
    color_count = [0] * problem.colors
    word: List[int] = []
    state = {"distinct": 0, "forest": 0, "scanned": 0}

    def place(vertex: int, block: int, sign: int) -> None:
        for j, c, is_forest in problem.back[vertex]:
            if word[j] == block:
                continue
            if is_forest:
                state["forest"] += sign
                continue
            before = color_count[c]
            color_count[c] = before + sign
            if before == 0 and sign > 0:
                state["distinct"] += 1
            elif before == 1 and sign < 0:
                state["distinct"] -= 1

    def descend(vertex: int, used: int) -> Optional[Tuple[int, ...]]:
        achieved = state["distinct"] + state["forest"]
        if vertex == n:
            state["scanned"] += 1
            if used >= 2 and t * (used - 1) - achieved >= 1:
                return tuple(word)
            return None
        # crossing edges among placed vertices stay crossing in every completion
        if problem.pruning and achieved >= t * (used + (n - vertex) - 1):
            return None
        for block in range(used + 1):
            word.append(block)
            place(vertex, block, +1)
            found = descend(vertex + 1, max(used, block + 1))
            place(vertex, block, -1)
            word.pop()
            if found is not None:
                return found
        return None

    used = 0
    for vertex, block in enumerate(prefix):
        # same cut as descend, so counts match the unsharded scan
        if problem.pruning and state["distinct"] + state["forest"] >= t * (used + (n - vertex) - 1):
            return None, 0, state["distinct"], state["forest"]
        word.append(block)
        place(vertex, block, +1)
        used = max(used, block + 1)
    found = descend(len(prefix), used)
    return found, state["scanned"], state["distinct"], state["forest"]


def scan_partitions(
    graph: EdgeColoredMultigraph,
    t: int,
    family: Optional[ForestFamily] = None,
    *,
    pruning: Optional[bool] = None,
    threads: Optional[int] = None,
) -> ScanResult:
    """
    Exhaustive scan for the first violating partition in restricted-growth order.

    With `family` None the color-disjoint tree condition is checked, otherwise
    the extension condition for that family. Work is sharded by restricted-growth
    prefix; shards are reduced in prefix order so the answer is the same for any
    worker count.
    """
    if graph.n < 1:
        raise PartitionError("scan needs at least one vertex")
    pruning = settings.search.pruning if pruning is None else pruning
    threads = settings.search.threads if threads is None else threads
    if family is not None and family.t != t:
        raise PartitionError(f"family has {family.t} forests, expected {t}")
    problem = _build_problem(graph, t, family, pruning)

    depth = min(settings.search.prefix_depth, graph.n) if threads > 1 else 0
    prefixes = list(iter_restricted_growth(depth)) if depth else [()]
    results = run_shards(_scan_shard, [(problem, prefix) for prefix in prefixes], threads)

    scanned = 0
    for found, count, _, _ in results:
        scanned += count
        if found is not None:
            partition = VertexPartition(found)
            if family is None:
                violation = deficiency_cd(graph, partition, t)
            else:
                violation = deficiency_ext(graph, family, partition, t)
            logger.debug(f"First violating partition {partition} with deficiency {violation.value}")
            return ScanResult(violation, scanned)
    return ScanResult(None, scanned)


def find_violating_partition(
    graph: EdgeColoredMultigraph,
    t: int,
    family: Optional[ForestFamily] = None,
    *,
    pruning: Optional[bool] = None,
    threads: Optional[int] = None,
) -> Optional[Deficiency]:
    """First partition (restricted-growth order) with deficiency >= 1, or None."""
    return scan_partitions(graph, t, family, pruning=pruning, threads=threads).violation


def decide_color_disjoint(graph: EdgeColoredMultigraph, t: int) -> bool:
    return find_violating_partition(graph, t) is None


def schrijver_condition(graph: EdgeColoredMultigraph) -> Optional[Deficiency]:
    """Rainbow spanning tree criterion: the t = 1 case of the scan."""
    return find_violating_partition(graph, 1)


def nash_williams_tutte_check(graph: EdgeColoredMultigraph, t: int) -> Optional[Deficiency]:
    """
    Edge-disjoint spanning tree criterion on the underlying multigraph, obtained
    by giving every edge its own color.
    """
    distinct = EdgeColoredMultigraph(graph.n, tuple((u, v, i) for i, (u, v, _) in enumerate(graph.edges)))
    return find_violating_partition(distinct, t)
