"""
extremal.py

Colorings of K_n with exactly r(n, t) colors and no t edge-disjoint rainbow
spanning trees, and the exhaustive check of r(n, t) over every coloring of a
small complete graph.

Colorings of K_n are restricted-growth strings over its edges in
lexicographic (u, v) order, so each set partition of the edges into color
classes is visited once.
"""

import logging
import random
from dataclasses import dataclass
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

from .antiramsey import PreconditionError, r_formula
from .config import settings
from .graph import EdgeColoredMultigraph, RainbowError, complete_graph
from .partitions import iter_restricted_growth, run_shards
from .search import exhaustive_edge_disjoint_search

logger = logging.getLogger(__name__)


class ExtremalSearchError(RainbowError):
    """Raised when no verified extremal coloring is found"""
    pass


def _canonical(colors: Sequence[int]) -> Tuple[int, ...]:
    """Relabel colors densely in order of first appearance."""
    renumber = {}
    return tuple(renumber.setdefault(c, len(renumber)) for c in colors)


def _edges(n: int) -> List[Tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def lacks_trees(graph: EdgeColoredMultigraph, t: int, budget: Optional[int] = None) -> bool:
    return not exhaustive_edge_disjoint_search(graph, t, budget).found


# --------------------------------------------------------------------------------------
# Constructions
# --------------------------------------------------------------------------------------

def _two_vertex_coloring(n: int, t: int) -> Tuple[int, ...]:
    """
    n >= 2t+2: K_{n-2} on vertices 2..n-1 is rainbow; the 2n-3 edges meeting
    {0, 1} get t-1 private colors and one shared color. Every spanning tree
    has two edges meeting {0, 1}, so it needs one of the t-1 private colors.
    """
    colors = []
    next_color = 0
    private = 0
    shared = None
    for u, v in _edges(n):
        if u <= 1:
            if private < t - 1:
                colors.append(next_color)
                next_color += 1
                private += 1
                continue
            if shared is None:
                shared = next_color
                next_color += 1
            colors.append(shared)
        else:
            colors.append(next_color)
            next_color += 1
    return _canonical(colors)


def _one_class_coloring(n: int, size: int) -> Tuple[int, ...]:
    """One color on the first `size` edges, every other edge its own color."""
    m = comb(n, 2)
    return _canonical([0] * size + list(range(1, m - size + 1)))


def hand_coloring(n: int, t: int) -> Tuple[int, ...]:
    """
    Constructed coloring with r(n, t) colors.

    For n = 2t+1 one color covers 2t+1 edges: trees take at most t of them,
    leaving too few edges for t trees. For n = 2t one color covers t+1 edges
    while t trees would need every edge.
    """
    if n >= 2 * t + 2:
        return _two_vertex_coloring(n, t)
    if n == 2 * t + 1:
        return _one_class_coloring(n, 2 * t + 1)
    return _one_class_coloring(n, t + 1)


def _shapes(total: int, parts: int, largest: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Integer partitions of `total` into exactly `parts` positive parts, largest first."""
    largest = total if largest is None else largest
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(largest, total - parts + 1), 0, -1):
        if first * parts < total:
            break
        for rest in _shapes(total - first, parts - 1, first):
            yield (first,) + rest


def _search_coloring(n: int, t: int, colors: int, rng: random.Random, budget: Optional[int]) -> Optional[Tuple[int, ...]]:
    """Random assignments of edges to classes, one shape of class sizes at a time."""
    m = comb(n, 2)
    for shape in _shapes(m, colors):
        for _ in range(settings.anti.extremal_attempts):
            order = list(range(m))
            rng.shuffle(order)
            assignment = [0] * m
            position = 0
            for color, size in enumerate(shape):
                for e in order[position:position + size]:
                    assignment[e] = color
                position += size
            candidate = _canonical(assignment)
            if lacks_trees(complete_graph(n, candidate), t, budget):
                logger.debug(f"Extremal search hit on shape {shape}")
                return candidate
    return None


def extremal_coloring(
    n: int,
    t: int,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> EdgeColoredMultigraph:
    """
    A coloring of K_n with exactly r(n, t) colors verified, by exact search,
    to have no t edge-disjoint rainbow spanning trees.

    Raises:
        PreconditionError: If n < 2t
        ExtremalSearchError: If neither the construction nor the search yields a verified coloring
        BudgetExhaustedError: If a verification runs out of budget
    """
    colors = r_formula(n, t)
    if colors < 1:
        raise PreconditionError(f"r({n},{t}) >= 1")
    candidate = hand_coloring(n, t)
    graph = complete_graph(n, candidate)
    if graph.num_colors == colors and lacks_trees(graph, t, budget):
        return graph

    logger.warning(f"Constructed coloring of K_{n} failed verification for t={t}; searching")
    found = _search_coloring(n, t, colors, random.Random(seed), budget)
    if found is None:
        raise ExtremalSearchError(f"no verified coloring of K_{n} with {colors} colors for t={t}")
    return complete_graph(n, found)


# --------------------------------------------------------------------------------------
# Exhaustive verification
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    n: int
    t: int
    r: int
    witness: Optional[Tuple[int, ...]]
    colorings_at_r: int
    colorings_above_r: int
    counterexample: Optional[Tuple[int, ...]]

    @property
    def confirmed(self) -> bool:
        return self.witness is not None and self.counterexample is None

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "colorings_at_r": self.colorings_at_r,
            "colorings_above_r": self.colorings_above_r,
            "confirmed": int(self.confirmed),
        }


def _verify_shard(job: Tuple[int, int, int, Tuple[int, ...], Optional[int]]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """
    Scan the colorings with `blocks` colors extending `prefix` up to the first
    one lacking t trees. Returns the number of colorings examined and that
    coloring, if any.
    """
    n, t, blocks, prefix, budget = job
    examined = 0
    for word in iter_restricted_growth(comb(n, 2), exact_blocks=blocks, prefix=prefix):
        examined += 1
        if lacks_trees(complete_graph(n, word), t, budget):
            return examined, word
    return examined, None


def _scan(n: int, t: int, blocks: int, threads: int, budget: Optional[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    m = comb(n, 2)
    depth = min(settings.search.prefix_depth, m) if threads > 1 else 0
    prefixes = list(iter_restricted_growth(depth, max_blocks=blocks)) if depth else [()]
    results = run_shards(_verify_shard, [(n, t, blocks, p, budget) for p in prefixes], threads)
    examined = 0
    for count, hit in results:
        examined += count
        if hit is not None:
            return examined, hit
    return examined, None


def verify_r_exhaustive(
    n: int,
    t: int,
    *,
    threads: Optional[int] = None,
    budget: Optional[int] = None,
) -> VerificationReport:
    """
    Check r(n, t) on the colorings of K_n with exactly r and exactly r+1
    colors: some coloring with r colors has no t edge-disjoint rainbow
    spanning trees, and every coloring with r+1 colors has them. Colorings
    with more colors refine one with r+1 colors, and refining a coloring
    keeps its rainbow trees rainbow, so they need no scan.

    Counts are schedule-independent: shards are reduced in prefix order.

    Raises:
        PreconditionError: If n exceeds the configured verification limit or n < 2t
        BudgetExhaustedError: If a single tree search runs out of budget
    """
    if n > settings.anti.max_verify_n:
        raise PreconditionError(f"n <= {settings.anti.max_verify_n} for exhaustive verification")
    threads = settings.search.threads if threads is None else threads
    r = r_formula(n, t)
    m = comb(n, 2)

    logger.info(f"Verifying r({n},{t}) = {r} over all colorings of K_{n}")
    at_r, witness = _scan(n, t, r, threads, budget) if r >= 1 else (0, None)
    if r == 0:
        witness = ()
    above_r, counterexample = _scan(n, t, r + 1, threads, budget) if r + 1 <= m else (0, None)
    report = VerificationReport(
        n=n,
        t=t,
        r=r,
        witness=witness,
        colorings_at_r=at_r,
        colorings_above_r=above_r,
        counterexample=counterexample,
    )
    logger.info(f"r({n},{t}) {'confirmed' if report.confirmed else 'NOT confirmed'}")
    return report
