"""
Test suite for the color-disjoint rainbow spanning tree solver.
Run with: python -m pytest rainbow_trees/tests/test_cdrst.py -v
"""

import random
from math import comb

import pytest
from hypothesis import given, strategies as st

from rainbow_trees.cdrst import corollary_threshold_check, greedy_initial_family, solve_color_disjoint
from rainbow_trees.graph import (
    DisjointMode,
    EdgeColoredMultigraph,
    GraphError,
    VertexPartition,
    complete_graph,
    validate_family,
)
from rainbow_trees.partitions import decide_color_disjoint, deficiency_cd
from rainbow_trees.search import exhaustive_color_disjoint_search

from .strategies import dense_colors, multigraphs, random_complete_coloring, random_multigraph


def assert_certificate(graph, t, certificate):
    """Either t color-disjoint rainbow spanning trees or a re-scored violating partition."""
    if certificate.found:
        assert certificate.trees.t == t
        assert certificate.trees.mode is DisjointMode.COLOR_DISJOINT
        assert validate_family(graph, certificate.trees)
        assert certificate.trees.is_spanning(graph)
    else:
        score = deficiency_cd(graph, certificate.violation.partition, t)
        assert score.violated
        assert score == certificate.violation


class TestGreedyInitialFamily:
    """Test the greedy starting family"""

    def test_rainbow_k4(self, rainbow_k4):
        """Test edges go to the first forest they fit"""
        family = greedy_initial_family(rainbow_k4, 2)
        assert family[0].edges == (0, 1, 2)
        assert family[1].edges == (3, 4)

    def test_colors_are_used_once(self, hand_example):
        """Test that a repeated color enters only one forest"""
        family = greedy_initial_family(hand_example, 2)
        assert validate_family(hand_example, family)
        assert family.total_edges() == 3

    def test_frozen_count_must_match(self, rainbow_k4):
        """Test that frozen forests must number t"""
        with pytest.raises(ValueError):
            greedy_initial_family(rainbow_k4, 2, frozen=())


class TestSolveColorDisjoint:
    """Test trees-or-partition certificates"""

    def test_rainbow_k4_two_trees(self, rainbow_k4):
        """Test that rainbow K_4 has two color-disjoint trees"""
        certificate = solve_color_disjoint(rainbow_k4, 2)
        assert certificate.found
        assert_certificate(rainbow_k4, 2, certificate)

    def test_rainbow_triangle_two_trees(self, rainbow_triangle):
        """Test the violation for two trees in a rainbow triangle"""
        certificate = solve_color_disjoint(rainbow_triangle, 2)
        assert not certificate.found
        assert certificate.violation.partition == VertexPartition.singletons(3)
        assert certificate.violation.value == 1

    def test_monochromatic_k4(self, mono_k4):
        """Test that one color cannot make a rainbow spanning tree of K_4"""
        certificate = solve_color_disjoint(mono_k4, 1)
        assert not certificate.found
        assert_certificate(mono_k4, 1, certificate)

    def test_trivial(self, rainbow_k4):
        """Test t = 0 and the one-vertex graph"""
        assert solve_color_disjoint(rainbow_k4, 0).route == "trivial"
        assert solve_color_disjoint(EdgeColoredMultigraph(1, ()), 3).trees.t == 3

    def test_negative_t(self, rainbow_k4):
        """Test that t must be non-negative"""
        with pytest.raises(ValueError):
            solve_color_disjoint(rainbow_k4, -1)

    def test_disconnected(self):
        """Test that a disconnected graph yields its components as the violation"""
        graph = EdgeColoredMultigraph(4, ((0, 1, 0), (2, 3, 1)))
        certificate = solve_color_disjoint(graph, 1)
        assert not certificate.found
        assert_certificate(graph, 1, certificate)

    @given(multigraphs(max_n=5), st.integers(1, 3))
    def test_agrees_with_exact_search(self, graph, t):
        """Test existence against exact search and validity of every certificate"""
        certificate = solve_color_disjoint(graph, t)
        assert_certificate(graph, t, certificate)
        assert certificate.found == exhaustive_color_disjoint_search(graph, t).found

    def test_seeded_sample(self):
        """Test a seeded sample of random multigraphs against the partition condition"""
        rng = random.Random(2024)
        for _ in range(40):
            n = rng.randint(3, 6)
            m = rng.randint(n, 3 * n)
            graph = random_multigraph(rng, n, m, rng.randint(1, m))
            t = rng.randint(1, 3)
            certificate = solve_color_disjoint(graph, t)
            assert_certificate(graph, t, certificate)
            assert certificate.found == decide_color_disjoint(graph, t)

    @pytest.mark.slow
    @pytest.mark.parametrize("n", range(4, 11))
    def test_rainbow_complete_graphs(self, n):
        """Test rainbow K_n: n // 2 trees exist and one more is refuted"""
        graph = complete_graph(n, range(comb(n, 2)))
        certificate = solve_color_disjoint(graph, n // 2)
        assert certificate.found
        assert_certificate(graph, n // 2, certificate)
        certificate = solve_color_disjoint(graph, n // 2 + 1)
        assert not certificate.found
        assert_certificate(graph, n // 2 + 1, certificate)

    @pytest.mark.slow
    def test_full_sweep(self):
        """Test 1000 random instances"""
        rng = random.Random(7)
        for _ in range(1000):
            n = rng.randint(3, 7)
            m = rng.randint(n, 4 * n)
            graph = random_multigraph(rng, n, m, rng.randint(1, m))
            t = rng.randint(1, 3)
            certificate = solve_color_disjoint(graph, t)
            assert_certificate(graph, t, certificate)
            assert certificate.found == decide_color_disjoint(graph, t)


class TestMultiplicityThreshold:
    """Test the multiplicity threshold for complete graphs"""

    def test_rainbow_k4(self, rainbow_k4):
        """Test that rainbow K_4 meets the threshold for two trees"""
        assert corollary_threshold_check(rainbow_k4, 2)
        assert solve_color_disjoint(rainbow_k4, 2).found

    def test_monochromatic(self, mono_k4):
        """Test that a single color fails the threshold"""
        assert not corollary_threshold_check(mono_k4, 1)

    def test_threshold_implies_trees(self):
        """Test random colorings of K_8 with multiplicity at most 2 for t = 2"""
        rng = random.Random(5)
        for _ in range(10):
            edges = list(range(28))
            rng.shuffle(edges)
            colors = [0] * 28
            for position, e in enumerate(edges):
                colors[e] = position // 2
            graph = complete_graph(8, colors)
            assert corollary_threshold_check(graph, 2)
            assert_certificate(graph, 2, solve_color_disjoint(graph, 2))
            assert solve_color_disjoint(graph, 2).found

    @pytest.mark.slow
    @pytest.mark.parametrize("t", [2, 3])
    def test_k12_threshold_sweep(self, t):
        """Test 200 colorings of K_12 with every color on at most 12/(2t) edges"""
        rng = random.Random(12 + t)
        highest = 12 // (2 * t)
        for _ in range(200):
            edges = list(range(66))
            rng.shuffle(edges)
            size = rng.randint(1, highest)
            colors = [0] * 66
            for position, e in enumerate(edges):
                colors[e] = position // size
            graph = complete_graph(12, dense_colors(colors))
            assert corollary_threshold_check(graph, t)
            certificate = solve_color_disjoint(graph, t)
            assert certificate.found
            assert_certificate(graph, t, certificate)

    def test_needs_complete_graph(self, hand_example):
        """Test that the check only applies to complete graphs"""
        with pytest.raises(GraphError):
            corollary_threshold_check(hand_example, 1)

    def test_random_complete_colorings(self):
        """Test that graphs passing the check are always solved"""
        rng = random.Random(9)
        for _ in range(20):
            graph = random_complete_coloring(rng, 6, rng.randint(10, 15))
            if corollary_threshold_check(graph, 1):
                assert solve_color_disjoint(graph, 1).found
