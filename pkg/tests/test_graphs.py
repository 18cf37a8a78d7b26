from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sofai_gc import (
    Conflict,
    DimacsError,
    Graph,
    detect_conflicts,
    parse_dimacs,
    parse_dimacs_instance,
    serialize_dimacs,
    verdict,
)

from oracles import conflicts_by_edge_enumeration, score_by_edge_enumeration
from strategies import er_graphs, graphs_with_assignments


class TestGraphConstruction:
    def test_adjacency_is_symmetric(self, fig2_graph):
        assert fig2_graph.adjacency["A"] == frozenset({"B", "C"})
        assert fig2_graph.adjacency["E"] == frozenset({"D"})
        for u, v in fig2_graph.edges:
            assert u in fig2_graph.adjacency[v]
            assert v in fig2_graph.adjacency[u]

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError, match="self-loop"):
            Graph(("A", "B"), (("A", "A"),))

    def test_rejects_duplicate_edge_either_orientation(self):
        with pytest.raises(ValueError, match="duplicate edge"):
            Graph(("A", "B"), (("A", "B"), ("B", "A")))

    def test_rejects_unknown_endpoint(self):
        with pytest.raises(ValueError, match="unknown vertex"):
            Graph(("A",), (("A", "B"),))

    def test_rejects_duplicate_vertices(self):
        with pytest.raises(ValueError, match="duplicate vertex"):
            Graph(("A", "A"), ())

    def test_density(self, fig2_graph, triangle):
        assert triangle.density == 1.0
        assert fig2_graph.density == 0.5
        assert Graph(("A",), ()).density == 0.0
        assert Graph((), ()).density == 0.0

    def test_induced_subgraph_preserves_order(self, fig2_graph):
        sub = fig2_graph.induced_subgraph({"C", "A", "B"})
        assert sub.vertices == ("A", "B", "C")
        assert sub.edges == (("A", "B"), ("A", "C"), ("B", "C"))

    def test_induced_subgraph_unknown_vertex(self, fig2_graph):
        with pytest.raises(ValueError, match="unknown"):
            fig2_graph.induced_subgraph({"Z"})


class TestParseDimacs:
    def test_parses_standard_instance(self):
        text = "c a comment\np edge 3 2\ne 1 2\ne 2 3"
        graph = parse_dimacs(text)
        assert graph.vertices == ("1", "2", "3")
        assert graph.edges == (("1", "2"), ("2", "3"))

    def test_parses_letter_vertices(self):
        graph = parse_dimacs("p edge 3 3\ne A B\ne B C\ne C A")
        assert graph.vertices == ("A", "B", "C")

    def test_structured_comments(self):
        text = "c k 3\nc label SAT\np edge 2 1\ne A B"
        graph, k, label = parse_dimacs_instance(text)
        assert (k, label) == (3, "SAT")
        assert graph.edges == (("A", "B"),)

    def test_unstructured_comments_ignored(self):
        graph, k, label = parse_dimacs_instance("c hello world\nc k notanint\np edge 1 0\nc vertices A")
        assert graph.vertices == ("A",)
        assert k is None and label is None

    def test_vertices_comment_defines_order_and_isolates(self):
        text = "c vertices C B A D\np edge 4 1\ne A B"
        graph = parse_dimacs(text)
        assert graph.vertices == ("C", "B", "A", "D")

    def test_integer_isolates_filled_from_header(self):
        graph = parse_dimacs("p edge 4 1\ne 2 3")
        assert graph.vertices == ("1", "2", "3", "4")

    def test_named_isolates_without_comment_rejected(self):
        with pytest.raises(DimacsError, match="declares 3 vertices"):
            parse_dimacs("p edge 3 1\ne A B")

    def test_noncanonical_integer_tokens_not_filled(self):
        with pytest.raises(DimacsError):
            parse_dimacs("p edge 3 1\ne 01 2")

    def test_missing_problem_line(self):
        with pytest.raises(DimacsError, match="missing problem line"):
            parse_dimacs("c nothing here")

    def test_duplicate_problem_line(self):
        with pytest.raises(DimacsError, match="duplicate problem line"):
            parse_dimacs("p edge 1 0\np edge 1 0")

    def test_edge_before_problem_line(self):
        with pytest.raises(DimacsError, match="before problem line"):
            parse_dimacs("e A B\np edge 2 1")

    def test_edge_count_mismatch(self):
        with pytest.raises(DimacsError, match="declares 2 edges, found 1"):
            parse_dimacs("p edge 2 2\ne A B")

    def test_self_loop_rejected(self):
        with pytest.raises(DimacsError, match="self-loop"):
            parse_dimacs("p edge 1 1\ne A A")

    def test_duplicate_edge_rejected(self):
        with pytest.raises(DimacsError, match="duplicate edge"):
            parse_dimacs("p edge 2 2\ne A B\ne B A")

    def test_bad_arity(self):
        with pytest.raises(DimacsError, match="expected 'e <u> <v>'"):
            parse_dimacs("p edge 2 1\ne A B C")
        with pytest.raises(DimacsError, match="expected 'p edge"):
            parse_dimacs("p edge 2")

    def test_unrecognized_line(self):
        with pytest.raises(DimacsError, match="unrecognized"):
            parse_dimacs("p edge 1 0\nx what")


class TestSerializeDimacs:
    def test_empty_graph_with_k(self):
        assert serialize_dimacs(Graph((), ()), k=1) == "c k 1\np edge 0 0"

    def test_round_trip_with_metadata(self, fig2_graph):
        text = serialize_dimacs(fig2_graph, k=2, label="UNSAT")
        graph, k, label = parse_dimacs_instance(text)
        assert graph == fig2_graph
        assert (k, label) == (2, "UNSAT")

    def test_no_vertices_comment_when_edges_cover_order(self, fig2_graph):
        assert "c vertices" not in serialize_dimacs(fig2_graph)

    def test_vertices_comment_for_isolates(self):
        graph = Graph(("A", "B", "C"), (("A", "B"),))
        text = serialize_dimacs(graph)
        assert "c vertices A B C" in text
        assert parse_dimacs(text) == graph

    def test_rejects_bad_metadata(self, triangle):
        with pytest.raises(ValueError):
            serialize_dimacs(triangle, k=0)
        with pytest.raises(ValueError):
            serialize_dimacs(triangle, label="MAYBE")

    @settings(max_examples=150)
    @given(er_graphs())
    def test_round_trip_property(self, graph):
        assert parse_dimacs(serialize_dimacs(graph)) == graph


class TestDetectConflicts:
    def test_worked_example(self, fig2_graph):
        conflicts = detect_conflicts(fig2_graph, {"A": 1, "B": 1, "C": 2, "D": 2, "E": 1})
        assert conflicts == [Conflict("A", "B", 1), Conflict("C", "D", 2)]

    def test_partial_assignment_edges_not_conflicts(self, triangle):
        assert detect_conflicts(triangle, {"A": 1}) == []

    def test_unknown_vertex_rejected(self, triangle):
        with pytest.raises(ValueError, match="unknown vertex"):
            detect_conflicts(triangle, {"Z": 1})

    def test_bad_color_rejected(self, triangle):
        with pytest.raises(ValueError, match="integer >= 1"):
            detect_conflicts(triangle, {"A": 0})


class TestVerdict:
    def test_worked_example_score(self, fig2_graph):
        v = verdict(fig2_graph, {"A": 1, "B": 1, "C": 2, "D": 2, "E": 1}, 2)
        assert v.score == Fraction(3, 5)
        assert not v.valid
        assert v.complete
        assert v.colors_used == 2

    def test_valid_coloring(self, fig2_graph):
        v = verdict(fig2_graph, {"A": 1, "B": 2, "C": 3, "D": 1, "E": 2}, 3)
        assert v.valid and v.score == 1 and v.conflicts == ()

    def test_over_budget_blocks_validity(self, triangle):
        v = verdict(triangle, {"A": 1, "B": 2, "C": 3}, 2)
        assert v.score == 1 and v.complete and v.colors_used == 3
        assert not v.valid

    def test_incomplete_blocks_validity(self, triangle):
        v = verdict(triangle, {"A": 1, "B": 2}, 3)
        assert not v.complete and not v.valid
        assert v.score == Fraction(1, 3)  # only (A,B) satisfied

    def test_edgeless_graph_scores_one(self):
        graph = Graph(("A", "B"), ())
        assert verdict(graph, {}, 1).score == Fraction(1)
        assert not verdict(graph, {}, 1).valid  # incomplete
        assert verdict(graph, {"A": 1, "B": 1}, 1).valid

    def test_empty_graph_vacuously_valid(self):
        assert verdict(Graph((), ()), {}, 1).valid

    def test_k_validation(self, triangle):
        with pytest.raises(ValueError, match="k must be"):
            verdict(triangle, {}, 0)

    @settings(max_examples=200)
    @given(graphs_with_assignments(), st.integers(1, 5))
    def test_score_matches_edge_enumeration(self, graph_and_assignment, k):
        graph, assignment = graph_and_assignment
        v = verdict(graph, assignment, k)
        assert v.score == score_by_edge_enumeration(graph, assignment)
        assert [(c.u, c.v, c.color) for c in v.conflicts] == conflicts_by_edge_enumeration(
            graph, assignment
        )

    @settings(max_examples=200)
    @given(graphs_with_assignments(), st.integers(1, 5))
    def test_valid_iff_proper_complete_within_budget(self, graph_and_assignment, k):
        graph, assignment = graph_and_assignment
        v = verdict(graph, assignment, k)
        proper = all(
            u in assignment and v2 in assignment and assignment[u] != assignment[v2]
            for u, v2 in graph.edges
        )
        complete = all(x in assignment for x in graph.vertices)
        budget = len(set(assignment.values())) <= k
        assert v.valid == (proper and complete and budget)
