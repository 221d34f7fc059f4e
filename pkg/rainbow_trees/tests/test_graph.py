"""
Test suite for the graph core.
Run with: python -m pytest rainbow_trees/tests/test_graph.py -v
"""

import networkx as nx
import pytest
from hypothesis import given

from rainbow_trees.graph import (
    DisjointMode,
    DisjointSet,
    EdgeColoredMultigraph,
    Forest,
    ForestFamily,
    GraphError,
    InvalidFamilyError,
    VertexPartition,
    coarsen_coloring,
    color_multiplicities,
    complete_graph,
    forest_components,
    fundamental_cycle,
    induced_subgraph,
    meet_partitions,
    require_valid,
    restricted_graph,
    validate_family,
)

from .strategies import multigraphs


def greedy_forest(graph: EdgeColoredMultigraph):
    """Edges kept by Kruskal's scan in index order, ignoring colors."""
    ds = DisjointSet(graph.n)
    return [e for e in range(graph.num_edges) if ds.merge(*graph.endpoints(e))]


class TestEdgeColoredMultigraph:
    """Test graph construction and accessors"""

    def test_loop_rejected(self):
        """Test that a loop edge is rejected"""
        with pytest.raises(GraphError, match="loop"):
            EdgeColoredMultigraph(3, ((0, 0, 0),))

    def test_sparse_palette_rejected(self):
        """Test that color ids must cover 0..k-1"""
        with pytest.raises(GraphError, match="dense"):
            EdgeColoredMultigraph(3, ((0, 1, 0), (1, 2, 2)))

    def test_endpoint_out_of_range(self):
        """Test that endpoints must be vertices"""
        with pytest.raises(GraphError):
            EdgeColoredMultigraph(2, ((0, 2, 0),))

    def test_parallel_equal_colored_edges_kept(self):
        """Test that parallel edges of one color both survive"""
        graph = EdgeColoredMultigraph(2, ((0, 1, 0), (0, 1, 0)))
        assert graph.num_edges == 2
        assert color_multiplicities(graph) == {0: 2}

    def test_complete_graph(self, rainbow_k4):
        """Test the lexicographic edge order of complete_graph"""
        assert [rainbow_k4.endpoints(e) for e in range(6)] == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        assert rainbow_k4.is_complete_simple()
        assert rainbow_k4.num_colors == 6

    def test_multigraph_is_not_complete_simple(self):
        """Test that parallel edges break simplicity"""
        graph = EdgeColoredMultigraph(2, ((0, 1, 0), (0, 1, 1)))
        assert not graph.is_complete_simple()

    def test_incidence_and_classes(self, hand_example):
        """Test incidence lists and color classes"""
        assert hand_example.incidence[0] == (0, 2)
        assert hand_example.color_classes[2] == (2, 3)
        assert hand_example.degree(3) == 2


class TestDisjointSet:
    """Test union-find"""

    def test_merge_reports_new_unions(self):
        """Test that merge is True only when two components join"""
        ds = DisjointSet(4)
        assert ds.merge(0, 1)
        assert ds.merge(2, 3)
        assert not ds.merge(1, 0)
        assert ds.merge(1, 3)
        assert ds.components == 1
        assert ds.find(0) == ds.find(2)


class TestVertexPartition:
    """Test restricted-growth partitions"""

    def test_rejects_non_normal_form(self):
        """Test that assignments must be restricted-growth strings"""
        with pytest.raises(GraphError):
            VertexPartition((1, 0))
        with pytest.raises(GraphError):
            VertexPartition((0, 2))

    def test_from_labels(self):
        """Test normalization of arbitrary labels"""
        assert VertexPartition.from_labels(["b", "a", "b", "c"]).assignment == (0, 1, 0, 2)

    def test_blocks_and_str(self):
        """Test block listing and the compact rendering"""
        partition = VertexPartition((0, 0, 1, 2))
        assert partition.blocks() == [[0, 1], [2], [3]]
        assert partition.block_count == 3
        assert str(partition) == "01|2|3"
        assert partition.separates(1, 2) and not partition.separates(0, 1)

    def test_meet(self):
        """Test that the meet intersects blocks"""
        meet = meet_partitions(VertexPartition((0, 0, 1, 1)), VertexPartition((0, 1, 0, 1)))
        assert meet == VertexPartition.singletons(4)
        same = meet_partitions(VertexPartition((0, 0, 1, 1)), VertexPartition.whole(4))
        assert same.assignment == (0, 0, 1, 1)

    def test_meet_size_mismatch(self):
        """Test that meets need partitions of the same set"""
        with pytest.raises(GraphError):
            meet_partitions(VertexPartition.whole(3), VertexPartition.whole(4))


class TestForests:
    """Test forests, components and cycles"""

    def test_forest_normalizes_edges(self):
        """Test that forests are sorted and deduplicated"""
        assert Forest((3, 1, 3)).edges == (1, 3)
        assert Forest((1, 3)).with_edges(added=(0,), removed=(3,)).edges == (0, 1)

    def test_components_of_empty_forest(self, rainbow_k4):
        """Test that the empty forest gives singletons"""
        assert forest_components(rainbow_k4, ()) == VertexPartition.singletons(4)

    @given(multigraphs())
    def test_components_match_networkx(self, graph):
        """Test block count against networkx connected components"""
        forest = greedy_forest(graph)
        oracle = nx.Graph()
        oracle.add_nodes_from(range(graph.n))
        oracle.add_edges_from(graph.endpoints(e) for e in forest)
        assert forest_components(graph, forest).block_count == nx.number_connected_components(oracle)
        assert Forest(tuple(forest)).is_acyclic(graph)

    @given(multigraphs())
    def test_fundamental_cycle_closes_a_cycle(self, graph):
        """Test that every non-forest edge inside a component closes a cycle with its path"""
        forest = greedy_forest(graph)
        partition = forest_components(graph, forest)
        for e in range(graph.num_edges):
            if e in forest or partition.separates(*graph.endpoints(e)):
                continue
            path = fundamental_cycle(graph, forest, e)
            assert set(path) <= set(forest)
            assert not Forest(tuple(path) + (e,)).is_acyclic(graph)

    def test_fundamental_cycle_on_path(self):
        """Test the path returned on a three-edge path"""
        graph = EdgeColoredMultigraph(4, ((0, 1, 0), (1, 2, 1), (2, 3, 2), (0, 3, 3)))
        assert fundamental_cycle(graph, (0, 1, 2), 3) == [0, 1, 2]

    def test_fundamental_cycle_between_components(self, rainbow_k4):
        """Test that an edge joining two components has no cycle"""
        with pytest.raises(GraphError):
            fundamental_cycle(rainbow_k4, (0,), 5)


class TestValidateFamily:
    """Test forest family validation"""

    def test_valid_family(self, hand_example):
        """Test a color-disjoint family"""
        family = ForestFamily((Forest((0, 1)), Forest((2,))))
        assert validate_family(hand_example, family)

    def test_cyclic(self, rainbow_triangle):
        """Test that a triangle is not a forest"""
        check = validate_family(rainbow_triangle, ForestFamily((Forest((0, 1, 2)),)))
        assert not check and check.reason == "cyclic"

    def test_not_rainbow(self, hand_example):
        """Test that repeated colors inside a forest are rejected"""
        check = validate_family(hand_example, ForestFamily((Forest((2, 3)),)))
        assert check.reason == "not-rainbow"

    def test_shared_edge(self, rainbow_triangle):
        """Test that edge-disjoint families cannot share edges"""
        family = ForestFamily((Forest((0,)), Forest((0,))), DisjointMode.EDGE_DISJOINT)
        assert validate_family(rainbow_triangle, family).reason == "shared-edge"

    def test_shared_color(self, hand_example):
        """Test that color-disjointness is checked only in that mode"""
        forests = (Forest((2,)), Forest((3,)))
        assert validate_family(hand_example, ForestFamily(forests, DisjointMode.COLOR_DISJOINT)).reason == "shared-color"
        assert validate_family(hand_example, ForestFamily(forests, DisjointMode.EDGE_DISJOINT))

    def test_edge_out_of_range(self, rainbow_triangle):
        """Test that unknown edges are reported, not raised"""
        assert validate_family(rainbow_triangle, ForestFamily((Forest((7,)),))).reason == "edge-out-of-range"

    def test_require_valid_raises_with_reason(self, rainbow_triangle):
        """Test the raising form"""
        with pytest.raises(InvalidFamilyError) as info:
            require_valid(rainbow_triangle, ForestFamily((Forest((0, 1, 2)),)))
        assert info.value.reason == "cyclic"

    def test_spanning(self, rainbow_k4):
        """Test spanning-tree detection"""
        assert ForestFamily((Forest((0, 1, 2)),)).is_spanning(rainbow_k4)
        assert not ForestFamily((Forest((0, 1)),)).is_spanning(rainbow_k4)


class TestDerivedGraphs:
    """Test restricted graphs, coarsening and induced subgraphs"""

    def test_restricted_graph(self, hand_example):
        """Test that edges of forest colors leave G'"""
        restricted = restricted_graph(hand_example, ForestFamily((Forest((0,)), Forest(()))))
        assert restricted.removed_colors == frozenset({0})
        assert restricted.edges == frozenset({1, 2, 3})

    def test_restricted_graph_rejects_shared_edges(self, hand_example):
        """Test that the forests must be edge-disjoint"""
        with pytest.raises(InvalidFamilyError):
            restricted_graph(hand_example, ForestFamily((Forest((0,)), Forest((0,)))))

    def test_coarsen(self, rainbow_k4):
        """Test folding colors into the last kept id"""
        coarse = coarsen_coloring(rainbow_k4, 3)
        assert coarse.num_colors == 3
        assert [c for _, _, c in coarse.edges] == [0, 1, 2, 2, 2, 2]
        with pytest.raises(GraphError):
            coarsen_coloring(rainbow_k4, 7)

    def test_induced_subgraph(self, rainbow_k4):
        """Test vertex deletion with dense relabelling and the edge map"""
        sub, origin = induced_subgraph(rainbow_k4, [1, 2, 3])
        assert sub.n == 3 and sub.is_complete_simple()
        assert origin == (3, 4, 5)
        assert sub.num_colors == 3

    def test_induced_subgraph_drops_colors(self, rainbow_k4):
        """Test color deletion"""
        sub, origin = induced_subgraph(rainbow_k4, [0, 1, 2, 3], drop_colors=[0, 5])
        assert origin == (1, 2, 3, 4)
        assert sub.num_colors == 4
