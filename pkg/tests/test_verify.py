from __future__ import annotations

import dataclasses
import random
from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagforge.combinatorics import turan_count, turan_parts
from flagforge.complex import VertexColoredGraph, build_multipartite, clique_counts
from flagforge.config import reset_runtime_config_for_tests
from flagforge.errors import FlagForgeError
from flagforge.models import FaceVector, SuiteCheck, SuiteRanges
from flagforge.verify import (
    SUITE_CHECKS,
    bound_consistency_suite,
    canonical_adjacency,
    canonical_form,
    generate_graphs,
    golden_complexes,
    graph_from_adjacency,
    search_flag_profiles,
    verify_graph,
)


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


def _adjacency(n: int, edges: list[tuple[int, int]]) -> tuple[int, ...]:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return tuple(adj)


@st.composite
def labelled_graphs(draw) -> tuple[int, list[tuple[int, int]], list[int]]:
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    order = draw(st.permutations(range(n)))
    return n, edges, list(order)


@settings(max_examples=80)
@given(case=labelled_graphs())
def test_canonical_form_ignores_labels(case) -> None:
    n, edges, order = case
    relabelled = [(order[u], order[v]) for u, v in edges]
    assert canonical_adjacency(_adjacency(n, edges)) == canonical_adjacency(_adjacency(n, relabelled))


def test_canonical_form_separates_non_isomorphic_graphs() -> None:
    path = _adjacency(4, [(0, 1), (1, 2), (2, 3)])
    star = _adjacency(4, [(0, 1), (0, 2), (0, 3)])
    assert canonical_adjacency(path) != canonical_adjacency(star)
    assert canonical_adjacency(()) == ()


def test_canonical_form_ignores_colors() -> None:
    a = VertexColoredGraph([1, 2, 3], [(0, 1), (1, 2)])
    b = VertexColoredGraph([5, 5, 5], [(2, 1), (1, 0)])
    assert canonical_form(a) == canonical_form(b)


def test_regular_graphs_with_many_automorphisms() -> None:
    # Two triangles and a hexagon share degree sequence and refinement.
    triangles = _adjacency(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    hexagon = _adjacency(6, [(i, (i + 1) % 6) for i in range(6)])
    assert canonical_adjacency(triangles) != canonical_adjacency(hexagon)
    petersen = nx.petersen_graph()
    edges = list(petersen.edges())
    shuffled = list(range(10))
    random.Random(7).shuffle(shuffled)
    moved = [(shuffled[u], shuffled[v]) for u, v in edges]
    assert canonical_adjacency(_adjacency(10, edges)) == canonical_adjacency(_adjacency(10, moved))


def test_generate_graphs_counts_isomorphism_classes() -> None:
    levels = generate_graphs(7)
    assert [len(levels[n]) for n in range(8)] == [1, 1, 2, 4, 11, 34, 156, 1044]


def test_generate_graphs_agrees_with_the_networkx_atlas() -> None:
    atlas = Counter(g.number_of_nodes() for g in nx.graph_atlas_g())
    levels = generate_graphs(6)
    for n in range(7):
        assert len(levels[n]) == atlas[n]
    atlas_forms = {
        canonical_adjacency(_adjacency(g.number_of_nodes(), list(g.edges())))
        for g in nx.graph_atlas_g()
        if g.number_of_nodes() == 5
    }
    assert atlas_forms == set(levels[5])


def test_generate_graphs_budget_guard() -> None:
    with pytest.raises(FlagForgeError) as exc:
        generate_graphs(10)
    assert exc.value.error_code == "FLAG_004"
    with pytest.raises(FlagForgeError) as exc:
        generate_graphs(-1)
    assert exc.value.error_code == "FLAG_001"


def test_search_triangle_counts_for_fifteen_edges() -> None:
    report = search_flag_profiles(2, 15, 3, 8, workers=1)

    assert report.max_vertices == 8
    assert {14, 16, 20} <= set(report.attained)
    assert report.excluded_in_domain == [1, 15, 17, 18, 19]
    assert report.witness_vertices[20] == 6
    assert report.witness_vertices[16] == 7
    for value, edges in report.attained.items():
        g = VertexColoredGraph([1] * report.witness_vertices[value], edges)
        counts = clique_counts(g, 3, threads=1)
        assert counts[2] == 15
        assert counts[3] == value


def test_search_four_cliques_for_nine_triangles() -> None:
    report = search_flag_profiles(3, 9, 4, 7, workers=1)
    assert max(report.attained) == 2


def test_search_small_domain_exclusion() -> None:
    report = search_flag_profiles(2, 3, 3, 3, workers=1)
    assert sorted(report.attained) == [1]
    assert report.excluded_in_domain == [0]
    doc = report.to_dict()
    assert doc["domain"] == {"max_vertices": 3}
    assert doc["witnesses"]["1"]["vertices"] == 3


def test_search_is_independent_of_workers() -> None:
    serial = search_flag_profiles(2, 6, 3, 6, workers=1)
    parallel = search_flag_profiles(2, 6, 3, 6, workers=2)
    assert parallel.to_dict() == serial.to_dict()


def test_search_budget_guard() -> None:
    with pytest.raises(FlagForgeError) as exc:
        search_flag_profiles(2, 3, 3, 10)
    assert exc.value.error_code == "FLAG_004"


def test_verify_graph_reports_first_mismatch() -> None:
    g = build_multipartite(turan_parts(54, 3))
    outcome = verify_graph(g, FaceVector((1, 54, 972, 5833)), threads=1)
    assert not outcome.passed
    assert (outcome.index, outcome.got, outcome.want) == (3, 5832, 5833)
    assert outcome.to_dict()["mismatch"] == {"index": 3, "got": 5832, "want": 5833}


def test_verify_graph_pass_and_padding() -> None:
    g = build_multipartite((18, 18, 18))
    assert verify_graph(g, FaceVector((1, 54, 972, 5832)), threads=1).passed
    short = verify_graph(g, FaceVector((1, 54, 972)), threads=1)
    assert not short.passed
    assert (short.index, short.got, short.want) == (3, 5832, 0)
    assert verify_graph(VertexColoredGraph(), FaceVector((1,))).passed


def test_graph_from_adjacency_round_trip() -> None:
    adj = _adjacency(4, [(0, 1), (2, 3)])
    g = graph_from_adjacency(adj)
    assert g.adjacency == adj
    assert g.colors == (1, 1, 1, 1)


def test_golden_complexes_all_build() -> None:
    golden = golden_complexes()
    assert set(golden) == {
        "turan_54_3",
        "simplex_5",
        "main_1_100_1000_2000",
        "main_1_62_1161_5832",
        "hvec_1_2_1",
        "hvec_1_3_3_1",
    }


def test_consistency_suite_passes() -> None:
    report = bound_consistency_suite()
    assert [check.name for check in report.checks] == [name for name, _ in SUITE_CHECKS]
    for check in report.checks:
        assert check.passed, check.to_dict()
        assert check.cases > 0


def test_consistency_suite_catches_a_broken_turan_formula() -> None:
    def broken(n: int, k: int, r: int) -> int:
        return turan_count(n, k, r) + 1

    report = bound_consistency_suite(
        SuiteRanges(turan_n=6, turan_r=3, turan_k=3, brute_force_n=6),
        turan=broken,
        only=["turan_formula_vs_recurrence", "turan_formula_vs_brute_force"],
    )
    assert not report.passed
    assert report.check("turan_formula_vs_recurrence").failed > 0
    assert report.check("turan_formula_vs_brute_force").failed > 0
    assert len(report.check("turan_formula_vs_brute_force").failures) <= 20


def test_full_ranges_brute_force_every_turan_count() -> None:
    full = SuiteRanges.full()
    assert full.brute_force_n == full.turan_n == 60
    assert (full.turan_r, full.turan_k) == (6, 6)


def test_construction_tails_match_the_cost_functions() -> None:
    report = bound_consistency_suite(
        SuiteRanges(tail_m=150, tail_k=4, tail_r=4, tail_graph_m=20),
        only=["cost_vs_construction_tail"],
    )
    check = report.check("cost_vs_construction_tail")
    assert check.passed, check.to_dict()
    # six two-face (k, p) pairs and seven dim (r, k, p) triples, each with a graph recount up to m = 20
    assert check.cases == (6 + 7) * (150 + 20)


def test_suite_check_failure_cap_is_not_a_field() -> None:
    assert "MAX_RECORDED" not in {f.name for f in dataclasses.fields(SuiteCheck)}
    check = SuiteCheck(name="x")
    for i in range(SuiteCheck.MAX_RECORDED + 5):
        check.record(False, i=i)
    assert check.failed == SuiteCheck.MAX_RECORDED + 5
    assert len(check.failures) == SuiteCheck.MAX_RECORDED
    assert "MAX_RECORDED" not in check.to_dict()


def test_consistency_suite_rejects_unknown_checks() -> None:
    with pytest.raises(FlagForgeError) as exc:
        bound_consistency_suite(only=["no_such_check"])
    assert exc.value.error_code == "FLAG_001"
