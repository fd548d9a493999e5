from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagforge.complex import (
    SimplicialComplexExplicit,
    VertexColoredGraph,
    build_multipartite,
    clique_counts,
    clique_f_vector,
    f_to_h,
    f_to_h_entries,
    h_to_f_entries,
    is_balanced,
    is_flag_closed,
    is_vertex_decomposable,
    maximal_cliques,
    plus_construction,
    polynomial_identity_holds,
)
from flagforge.config import reset_runtime_config_for_tests
from flagforge.errors import FlagForgeError
from flagforge.models import FaceVector


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


@st.composite
def small_graphs(draw, max_vertices: int = 9) -> VertexColoredGraph:
    n = draw(st.integers(0, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return VertexColoredGraph([1] * n, chosen)


def _to_networkx(g: VertexColoredGraph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.vertex_count))
    out.add_edges_from(g.edges())
    return out


def test_graph_rejects_bad_input() -> None:
    g = VertexColoredGraph([1, 2])
    for edge in ((0, 0), (0, 5)):
        with pytest.raises(FlagForgeError) as exc:
            g.add_edge(*edge)
        assert exc.value.error_code == "FLAG_002"
    with pytest.raises(FlagForgeError) as exc:
        VertexColoredGraph([0])
    assert exc.value.error_code == "FLAG_002"
    with pytest.raises(FlagForgeError) as exc:
        VertexColoredGraph([1, 2], [(0, 1, 1)])
    assert exc.value.error_code == "FLAG_002"


def test_build_multipartite() -> None:
    g = build_multipartite((2, 3))
    assert g.colors == (1, 1, 2, 2, 2)
    assert g.edge_count == 6
    assert g.is_properly_colored()
    assert g.color_classes() == {1: [0, 1], 2: [2, 3, 4]}


def test_clique_counts_on_turan_graph() -> None:
    g = build_multipartite((18, 18, 18))
    assert clique_counts(g, 4, threads=1) == [1, 54, 972, 5832, 0]
    assert clique_f_vector(g, threads=1).entries == (1, 54, 972, 5832)


def test_clique_counts_do_not_depend_on_threads() -> None:
    g = build_multipartite((4, 3, 3, 2))
    g.add_vertex(5, [0, 4, 7])
    g.add_vertex(5, [1, 2, 5, 8, 10])
    assert clique_counts(g, 5, threads=2) == clique_counts(g, 5, threads=1)


def test_clique_f_vector_of_empty_graph() -> None:
    assert clique_f_vector(VertexColoredGraph()).entries == (1,)


@settings(max_examples=60)
@given(g=small_graphs())
def test_clique_counts_match_networkx(g: VertexColoredGraph) -> None:
    n = g.vertex_count
    counts = clique_counts(g, max(n, 1), threads=1)
    expected = [1] + [0] * max(n, 1)
    for clique in nx.enumerate_all_cliques(_to_networkx(g)):
        expected[len(clique)] += 1
    assert counts == expected


@settings(max_examples=60)
@given(g=small_graphs())
def test_maximal_cliques_match_networkx(g: VertexColoredGraph) -> None:
    ours = sorted(sorted(c) for c in maximal_cliques(g))
    theirs = sorted(sorted(c) for c in nx.find_cliques(_to_networkx(g))) if g.vertex_count else []
    assert ours == theirs


def test_f_to_h_of_octahedron() -> None:
    assert f_to_h(FaceVector((1, 6, 12, 8))).entries == (1, 3, 3, 1)


@given(tail=st.lists(st.integers(-20, 50), max_size=6))
def test_h_and_f_conversions_are_inverse(tail: list[int]) -> None:
    h = [1] + tail
    f = h_to_f_entries(h)
    assert f_to_h_entries(f) == h
    assert all(polynomial_identity_holds(f, h, t) for t in range(-3, 4))


def test_plus_construction_of_an_edge_is_a_four_cycle() -> None:
    g = VertexColoredGraph([1, 2], [(0, 1)])
    plus = plus_construction(g, range(1, 3))
    assert plus.vertex_count == 4
    assert plus.edge_count == 4
    assert clique_f_vector(plus).entries == (1, 4, 4)
    assert f_to_h(clique_f_vector(plus)).entries == (1, 2, 1)
    assert is_balanced(plus)


def test_plus_construction_of_empty_graph_is_a_simplex() -> None:
    plus = plus_construction(VertexColoredGraph(), range(1, 4))
    assert clique_f_vector(plus).entries == (1, 3, 3, 1)


def test_plus_construction_needs_a_proper_coloring() -> None:
    with pytest.raises(FlagForgeError) as exc:
        plus_construction(VertexColoredGraph([1, 1], [(0, 1)]))
    assert exc.value.error_code == "FLAG_005"


def test_plus_construction_colors_must_cover_the_graph() -> None:
    with pytest.raises(FlagForgeError) as exc:
        plus_construction(VertexColoredGraph([1, 3]), range(1, 3))
    assert exc.value.error_code == "FLAG_001"


def test_is_balanced_rejects_improper_coloring() -> None:
    assert not is_balanced(VertexColoredGraph([1, 1], [(0, 1)]))
    assert is_balanced(VertexColoredGraph([1, 2], [(0, 1)]))


def test_explicit_complex_link_and_deletion() -> None:
    path = SimplicialComplexExplicit.from_graph(VertexColoredGraph([1, 2, 1], [(0, 1), (1, 2)]))
    assert path.facets == {frozenset({0, 1}), frozenset({1, 2})}
    assert path.f_vector().entries == (1, 3, 2)
    assert path.link(1).facets == {frozenset({0}), frozenset({2})}
    assert path.deletion(1).facets == {frozenset({0}), frozenset({2})}
    assert not path.is_shedding(1)
    assert path.is_shedding(0)


def test_empty_graph_spans_the_empty_face_only() -> None:
    c = SimplicialComplexExplicit.from_graph(VertexColoredGraph())
    assert c.facets == {frozenset()}
    assert c.f_vector().entries == (1,)


def test_vertex_decomposability() -> None:
    square = VertexColoredGraph([1, 2, 1, 2], [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert is_vertex_decomposable(SimplicialComplexExplicit.from_graph(square))
    two_edges = VertexColoredGraph([1, 2, 1, 2], [(0, 1), (2, 3)])
    assert not is_vertex_decomposable(SimplicialComplexExplicit.from_graph(two_edges))


def test_vertex_decomposability_size_guard() -> None:
    big = SimplicialComplexExplicit.from_graph(build_multipartite((1,) * 26))
    with pytest.raises(FlagForgeError) as exc:
        is_vertex_decomposable(big)
    assert exc.value.error_code == "FLAG_004"


def test_is_flag_closed() -> None:
    hollow = SimplicialComplexExplicit([{0, 1}, {1, 2}, {0, 2}])
    assert not is_flag_closed(hollow)
    g = VertexColoredGraph([1, 2, 3], [(0, 1), (1, 2), (0, 2)])
    assert is_flag_closed(SimplicialComplexExplicit.from_graph(g))
