"""
Test suite for the forest extension solver.
Run with: python -m pytest rainbow_trees/tests/test_extension.py -v
"""

import random

import pytest
from hypothesis import given, strategies as st

from rainbow_trees.graph import (
    DisjointMode,
    DisjointSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    InvalidFamilyError,
    VertexPartition,
    complete_graph,
)
from rainbow_trees.extension import extend_to_trees, extension_guarantee, is_valid_extension
from rainbow_trees.partitions import deficiency_ext, scan_partitions
from rainbow_trees.search import exhaustive_extension_search

from .strategies import multigraphs, random_multigraph


def random_forests(graph: EdgeColoredMultigraph, t: int, picks) -> ForestFamily:
    """Edge-disjoint rainbow forests from a sequence of (edge, forest) proposals."""
    forests = [[] for _ in range(t)]
    components = [DisjointSet(graph.n) for _ in range(t)]
    taken = set()
    for e, j in picks:
        if e in taken or graph.color(e) in graph.colors_of(forests[j]):
            continue
        if components[j].merge(*graph.endpoints(e)):
            forests[j].append(e)
            taken.add(e)
    return ForestFamily(tuple(Forest(tuple(f)) for f in forests), DisjointMode.EDGE_DISJOINT)


def assert_extension_certificate(graph, family, certificate):
    if certificate.found:
        assert is_valid_extension(graph, family, certificate.trees)
    elif certificate.proven_absent:
        assert scan_partitions(graph, family.t, family).violation is None
        assert not exhaustive_extension_search(graph, family).found
    else:
        score = deficiency_ext(graph, family, certificate.violation.partition)
        assert score.violated
        assert score == certificate.violation


class TestExtendToTrees:
    """Test extension-or-partition certificates"""

    def test_extends_single_edge(self, rainbow_k4):
        """Test that one edge of rainbow K_4 extends to two trees"""
        family = ForestFamily((Forest((0,)), Forest(())), DisjointMode.EDGE_DISJOINT)
        certificate = extend_to_trees(rainbow_k4, family)
        assert certificate.found
        assert certificate.guarantee is DisjointMode.COLOR_DISJOINT
        assert_extension_certificate(rainbow_k4, family, certificate)

    def test_forest_color_blocks_extension(self):
        """Test the violation when the only other edge repeats a forest color"""
        graph = EdgeColoredMultigraph(2, ((0, 1, 0), (0, 1, 0)))
        family = ForestFamily((Forest((0,)), Forest(())), DisjointMode.EDGE_DISJOINT)
        certificate = extend_to_trees(graph, family)
        assert not certificate.found
        assert certificate.violation.partition == VertexPartition((0, 1))
        assert (certificate.violation.required, certificate.violation.achieved) == (2, 1)

    def test_spanning_input_is_kept(self, rainbow_k4):
        """Test that spanning trees extend to themselves"""
        family = ForestFamily((Forest((0, 3, 5)), Forest((1, 2, 4))), DisjointMode.EDGE_DISJOINT)
        certificate = extend_to_trees(rainbow_k4, family)
        assert certificate.trees.forests == family.forests

    def test_invalid_family(self, rainbow_triangle):
        """Test that cyclic forests are rejected"""
        with pytest.raises(InvalidFamilyError):
            extend_to_trees(rainbow_triangle, ForestFamily((Forest((0, 1, 2)),)))

    def test_trivial(self, rainbow_k4):
        """Test the empty family"""
        assert extend_to_trees(rainbow_k4, ForestFamily.empty(0)).route == "trivial"

    @given(multigraphs(max_n=5, max_m=8), st.integers(1, 2), st.data())
    def test_agrees_with_exact_search(self, graph, t, data):
        """Test existence against exact search and validity of every certificate"""
        picks = data.draw(
            st.lists(st.tuples(st.integers(0, graph.num_edges - 1), st.integers(0, t - 1)), max_size=6)
        )
        family = random_forests(graph, t, picks)
        certificate = extend_to_trees(graph, family)
        assert_extension_certificate(graph, family, certificate)
        assert certificate.found == exhaustive_extension_search(graph, family).found

    def run_sample(self, rng, count: int, max_n: int):
        for _ in range(count):
            n = rng.randint(3, max_n)
            m = rng.randint(n, 3 * n)
            graph = random_multigraph(rng, n, m, rng.randint(1, m))
            t = rng.randint(1, 3)
            picks = [(rng.randrange(m), rng.randrange(t)) for _ in range(rng.randint(0, n))]
            family = random_forests(graph, t, picks)
            certificate = extend_to_trees(graph, family)
            assert_extension_certificate(graph, family, certificate)
            assert certificate.found == exhaustive_extension_search(graph, family).found
            if scan_partitions(graph, t, family).violation is not None:
                assert not certificate.found

    def test_seeded_sample(self):
        """Test a seeded sample against the partition condition and exact search"""
        self.run_sample(random.Random(31), 30, 6)

    @pytest.mark.slow
    def test_full_sweep(self):
        """Test 500 instances: violations rule out extensions, and found agrees with exact search"""
        self.run_sample(random.Random(31), 500, 5)

    def test_partition_count_is_not_sufficient(self):
        """Test forests that pass every partition count but cannot reach vertex 3"""
        graph = EdgeColoredMultigraph(
            4, ((0, 2, 0), (3, 1, 1), (1, 2, 2), (3, 2, 3), (3, 1, 3), (1, 0, 4), (1, 2, 5), (0, 1, 2))
        )
        family = ForestFamily((Forest((1, 3)), Forest(())), DisjointMode.EDGE_DISJOINT)
        assert scan_partitions(graph, 2, family).violation is None
        certificate = extend_to_trees(graph, family)
        assert not certificate.found
        assert certificate.proven_absent
        assert certificate.route == "proven-absent"
        assert_extension_certificate(graph, family, certificate)


class TestGuarantee:
    """Test the disjointness guarantee of extensions"""

    def test_color_disjoint_input(self, hand_example):
        """Test color-disjoint forests give color-disjoint trees"""
        family = ForestFamily((Forest((0,)), Forest((2,))), DisjointMode.EDGE_DISJOINT)
        assert extension_guarantee(hand_example, family) is DisjointMode.COLOR_DISJOINT

    def test_shared_colors(self, hand_example):
        """Test forests sharing a color only guarantee edge-disjoint trees"""
        family = ForestFamily((Forest((2,)), Forest((3,))), DisjointMode.EDGE_DISJOINT)
        assert extension_guarantee(hand_example, family) is DisjointMode.EDGE_DISJOINT


class TestIsValidExtension:
    """Test the extension checker"""

    def test_rejects_reused_forest_color(self):
        """Test that added edges may not carry a forest color"""
        graph = complete_graph(3, [0, 0, 1])
        family = ForestFamily((Forest((0,)),), DisjointMode.EDGE_DISJOINT)
        assert is_valid_extension(graph, family, ForestFamily((Forest((0, 2)),)))
        assert not is_valid_extension(graph, family, ForestFamily((Forest((0, 1)),)))

    def test_rejects_dropped_forest_edge(self, rainbow_k4):
        """Test that trees must contain their forests"""
        family = ForestFamily((Forest((5,)),), DisjointMode.EDGE_DISJOINT)
        assert not is_valid_extension(rainbow_k4, family, ForestFamily((Forest((0, 1, 2)),)))
