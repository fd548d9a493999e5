from __future__ import annotations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from flagforge.bounds import (
    c_cost,
    c_cost_ceiling,
    c_cost_table,
    c_cost_upper,
    d_cost,
    d_cost_table,
    diagnose_face_vector,
    equal_vertices_bound,
    ffk_bound,
    flag_lower_bound,
    flag_or_shadow_bound,
    kk_chain,
    kk_shadow,
    kk_upper,
    limit_constant_dim,
    limit_constant_two,
    meets_equal_vertices,
    ratio_to_limit,
    to_decimal,
    within_c_cost_ceiling,
    within_c_cost_upper,
    within_d_cost_upper,
)
from flagforge.combinatorics import binom
from flagforge.complex import clique_counts
from flagforge.config import reset_runtime_config_for_tests
from flagforge.construct import construct_two_face, two_face_extra_vertices
from flagforge.errors import FlagForgeError
from flagforge.models import FaceVector


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


def _close(value: sympy.Expr, target: sympy.Expr, tolerance: float) -> bool:
    return abs(float(sympy.N(value / target, 30)) - 1) <= tolerance


def test_kk_shadow_and_chain() -> None:
    assert kk_shadow(9, 3, 2) == 10
    assert kk_shadow(2000, 3, 2) == 275
    assert kk_chain(9, 3, 1) == 10
    assert kk_chain(10, 2, 1, direction="up") == kk_upper(10, 2, 1) == 10
    with pytest.raises(FlagForgeError) as exc:
        kk_chain(9, 3, 1, direction="sideways")
    assert exc.value.error_code == "FLAG_001"


def test_kk_upper_one_step() -> None:
    # 9 = C(4,3) + C(3,2) + C(2,1)
    assert kk_upper(9, 3, 1) == 3


def test_kk_upper_rejects_nonpositive_step() -> None:
    with pytest.raises(FlagForgeError):
        kk_upper(10, 2, 0)


def test_ffk_bound_on_turan_numbers() -> None:
    assert ffk_bound(972, 2, 1, 3) == 54
    assert ffk_bound(5832, 3, 2, 3) == 972
    assert ffk_bound(2000, 3, 2, 3) == 479


def test_c_cost_small_values() -> None:
    assert c_cost(0, 3, 2) == 0
    assert c_cost(2, 3, 2) == 4
    assert c_cost(3, 3, 2) == 3
    assert c_cost(5, 3, 2) == 7


def test_cost_values_on_seven() -> None:
    assert c_cost(7, 3, 2) == 6
    assert d_cost(7, 3, 2, 3) == 7


def test_c_cost_matches_the_two_face_tail() -> None:
    assert c_cost(128, 3, 2) == 24
    assert [e.n for e in two_face_extra_vertices(3, 128)] == [16, 4, 2, 2]

    # C(20,3) = 1140 leaves a remainder of 128 for the extra vertices.
    result = construct_two_face(3, 2, 1268, binom(20, 2) + 24, threads=1)
    assert result.succeeded
    stage = result.plan.stage(3)
    assert (stage.n0, stage.m0, stage.pendants) == (20, 128, 0)
    assert sum(binom(e.n, 1) for e in stage.extras) == c_cost(stage.m0, 3, 2)
    counts = clique_counts(result.graph, 3, threads=1)
    assert counts[3] - binom(20, 3) == 128
    assert counts[2] - binom(20, 2) == 24


def test_two_face_overshoot_reports_the_tail() -> None:
    failure = construct_two_face(3, 2, 1268, 1, threads=1).plan.failure
    assert failure.reason == "overshoot"
    assert failure.used == binom(20, 2) + c_cost(128, 3, 2)


@given(st.data())
def test_d_cost_equals_c_cost_below_one_full_color_class(data: st.DataObject) -> None:
    r = data.draw(st.integers(3, 8))
    k = data.draw(st.integers(2, r))
    p = data.draw(st.integers(1, k - 1))
    m = data.draw(st.integers(0, binom(r - 1, k - 1) - 1))
    assert d_cost(m, k, p, r) == c_cost(m, k, p)


def test_cost_tables_match_pointwise_values() -> None:
    table = c_cost_table(300, 4, 2)
    assert table == [c_cost(m, 4, 2) for m in range(301)]
    colored = d_cost_table(300, 3, 2, 4)
    assert colored == [d_cost(m, 3, 2, 4) for m in range(301)]


def test_d_cost_needs_enough_colors() -> None:
    with pytest.raises(FlagForgeError) as exc:
        d_cost(10, 4, 2, 3)
    assert exc.value.error_code == "FLAG_001"


def test_stated_ceiling_is_exceeded_for_small_m() -> None:
    cost = c_cost(5, 3, 2)
    assert not within_c_cost_upper(cost, 5, 3, 2)
    assert sympy.N(c_cost_upper(5, 3, 2), 30) < cost
    assert within_c_cost_ceiling(cost, 5, 3, 2)
    assert sympy.N(c_cost_ceiling(5, 3, 2), 30) >= cost


def test_stated_ceiling_equality_case_is_within() -> None:
    # c_cost(2, 3, 2) = 4 sits exactly on 2 * sqrt(2) * sqrt(2).
    assert within_c_cost_upper(4, 2, 3, 2)
    assert not within_c_cost_upper(5, 2, 3, 2)


def test_c_cost_stays_under_the_safe_ceiling() -> None:
    for k in range(3, 6):
        for p in range(2, k):
            table = c_cost_table(2000, k, p)
            assert all(within_c_cost_ceiling(table[m], m, k, p) for m in range(2001))


def test_d_cost_stays_under_its_ceiling() -> None:
    for r in range(3, 6):
        for k in range(3, r + 1):
            for p in range(2, k):
                table = d_cost_table(1000, k, p, r)
                assert all(within_d_cost_upper(table[m], m, k, p, r) for m in range(1001))


def test_limit_constants() -> None:
    assert sympy.simplify(limit_constant_two(3, 2) - sympy.sqrt(2)) == 0
    assert sympy.simplify(limit_constant_dim(4, 3, 2) - sympy.sqrt(3)) == 0


def test_costs_approach_their_limits() -> None:
    m = 10**6
    assert c_cost(m, 3, 2) == 1470
    assert _close(ratio_to_limit(c_cost(m, 3, 2), m, 3, 2), limit_constant_two(3, 2), 0.05)
    assert d_cost(m, 3, 2, 4) == 1748
    assert _close(ratio_to_limit(d_cost(m, 3, 2, 4), m, 3, 2), limit_constant_dim(4, 3, 2), 0.02)


def test_wide_palette_limit_approaches_the_uncolored_limit() -> None:
    for k, p in ((3, 2), (4, 2), (4, 3), (5, 3)):
        assert _close(limit_constant_dim(1000, k, p), limit_constant_two(k, p), 0.01)


def test_equal_vertices_bound_is_tight_on_turan_graph() -> None:
    assert meets_equal_vertices(54, 3, 2, 1, 972)
    assert not meets_equal_vertices(53, 3, 2, 1, 972)
    assert sympy.simplify(equal_vertices_bound(3, 2, 1, 972) - 54) == 0


def test_equal_vertices_bound_on_top_faces() -> None:
    assert sympy.simplify(equal_vertices_bound(3, 3, 2, 5832) - 972) == 0
    assert meets_equal_vertices(972, 3, 3, 2, 5832)
    assert not meets_equal_vertices(971, 3, 3, 2, 5832)


def test_to_decimal_respects_precision() -> None:
    text = to_decimal(sympy.sqrt(2), 60)
    assert text.startswith("1.41421356237309504880168872420969807856967187537694")


def test_flag_lower_bound_on_the_worked_example() -> None:
    report = flag_lower_bound(2000, 3, 2)
    assert report.value == 281
    assert report.branch_taken == "simplex_branch"
    assert report.details["simplex_branch"] == 281


def test_flag_or_shadow_bound_falls_back_below_three() -> None:
    report = flag_or_shadow_bound(1000, 2, 1)
    assert report.value == kk_shadow(1000, 2, 1) == 46
    with pytest.raises(FlagForgeError) as exc:
        flag_lower_bound(1000, 2, 1)
    assert exc.value.error_code == "FLAG_006"


def test_diagnose_face_vector_flags_a_non_flag_vector() -> None:
    assert diagnose_face_vector(FaceVector((1, 3, 3))) == [
        {"bound": "ffk_r2", "k": 2, "f_index": 0, "have": 3, "need": 4}
    ]


def test_diagnose_face_vector_accepts_the_worked_example() -> None:
    assert diagnose_face_vector(FaceVector((1, 100, 1000, 2000))) == []
