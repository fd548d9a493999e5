from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flagforge.config import reset_runtime_config_for_tests
from flagforge.decompose import (
    color_rep,
    dim_two_term_rep,
    enumerate_representations,
    evaluate,
    flag_rep,
    is_admissible,
    kk_rep,
    two_term_rep,
)
from flagforge.errors import FlagForgeError


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


def test_kk_rep_greedy_terms() -> None:
    rep = kk_rep(9, 3)
    assert rep.terms == ((4, 3), (3, 2), (2, 1))
    assert rep.tops == (4, 3, 2)
    assert evaluate(rep) == 9


def test_kk_rep_single_term() -> None:
    assert kk_rep(10, 3).terms == ((5, 3),)
    assert kk_rep(1, 1).terms == ((1, 1),)


def test_color_rep_for_the_worked_example() -> None:
    rep = color_rep(2000, 3, 3)
    assert rep.terms == ((37, 3), (22, 2), (7, 1))
    assert rep.flavor == "colored"
    assert evaluate(rep) == 2000


def test_color_rep_needs_enough_colors() -> None:
    with pytest.raises(FlagForgeError) as exc:
        color_rep(10, 3, 2)
    assert exc.value.error_code == "FLAG_001"


@pytest.mark.parametrize("m", [0, -3])
def test_representations_reject_nonpositive_m(m: int) -> None:
    with pytest.raises(FlagForgeError) as exc:
        kk_rep(m, 3)
    assert exc.value.error_code == "FLAG_001"


def test_two_term_rep() -> None:
    rep = two_term_rep(9, 3)
    assert (rep.a, rep.b, rep.m) == (4, 3, 2)
    assert evaluate(rep) == 9

    single = two_term_rep(10, 3)
    assert (single.a, single.b, single.m) == (5, 1, 0)
    assert evaluate(single) == 10


def test_dim_two_term_rep() -> None:
    rep = dim_two_term_rep(2000, 3, 3)
    assert (rep.a, rep.b, rep.m) == (37, 22, 7)
    assert rep.flavor == "colored"
    assert evaluate(rep) == 2000


def test_flag_rep_for_the_worked_example() -> None:
    rep = flag_rep(2000, 3)
    assert rep.n_k == 23
    assert rep.n_k1 == 21
    assert rep.a_terms == ((6, 2), (4, 1))
    assert evaluate(rep) == 2000


def test_flag_rep_of_a_binomial_has_no_tail() -> None:
    rep = flag_rep(20, 3)
    assert rep.n_k == 6
    assert rep.n_k1 is None
    assert rep.a_terms == ()


def test_flag_rep_undefined_below_three() -> None:
    with pytest.raises(FlagForgeError) as exc:
        flag_rep(5, 2)
    assert exc.value.error_code == "FLAG_006"


def test_is_admissible() -> None:
    assert is_admissible(((4, 3), (3, 2), (2, 1)), 3)
    assert not is_admissible(((4, 3), (4, 2)), 3)
    assert not is_admissible(((4, 3), (2, 1)), 3)
    assert not is_admissible((), 3)
    assert is_admissible(((37, 3), (22, 2), (7, 1)), 3, r=3)
    # 37 - 37 // 3 = 25 must exceed the next top.
    assert not is_admissible(((37, 3), (25, 2)), 3, r=3)


@given(m=st.integers(1, 5000), k=st.integers(1, 6))
def test_kk_rep_evaluates_back(m: int, k: int) -> None:
    rep = kk_rep(m, k)
    assert evaluate(rep) == m
    assert is_admissible(rep.terms, k)


@given(m=st.integers(1, 5000), k=st.integers(1, 5), extra=st.integers(0, 3))
def test_color_rep_evaluates_back(m: int, k: int, extra: int) -> None:
    rep = color_rep(m, k, k + extra)
    assert evaluate(rep) == m
    assert is_admissible(rep.terms, k, r=k + extra)


def test_plain_cascades_are_unique() -> None:
    for k in range(1, 5):
        for m in range(1, 80):
            assert list(enumerate_representations(m, k)) == [kk_rep(m, k).terms]


def test_colored_cascades_are_unique() -> None:
    for k in range(1, 4):
        for r in range(k, 5):
            for m in range(1, 80):
                assert list(enumerate_representations(m, k, r)) == [color_rep(m, k, r).terms]
