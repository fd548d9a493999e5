"""Canonical cascade representations of integers.

A plain cascade writes m as binom(n_k, k) + binom(n_{k-1}, k-1) + ... with
strictly decreasing tops; a colored cascade uses Turán coefficients
turan(n_{k-i}, k-i, r-i) and the gap condition
n_{k-i} - floor(n_{k-i} / (r-i)) > n_{k-i-1}. Both are produced greedily.
"""

from __future__ import annotations

from collections.abc import Iterator

from flagforge.combinatorics import binom, greatest_binom_top, greatest_turan_top, turan_count
from flagforge.errors import input_error, make_error
from flagforge.models import CascadeRep, FlagRep, TwoTermRep

Terms = tuple[tuple[int, int], ...]


def _require_positive(m: int, k: int) -> None:
    if m < 1:
        raise input_error("m must be >= 1.", m=m)
    if k < 1:
        raise input_error("k must be >= 1.", k=k)


def _plain_terms(m: int, k: int) -> Terms:
    terms: list[tuple[int, int]] = []
    rem = m
    bottom = k
    while rem > 0 and bottom >= 1:
        top = greatest_binom_top(rem, bottom)
        terms.append((top, bottom))
        rem -= binom(top, bottom)
        bottom -= 1
    return tuple(terms)


def kk_rep(m: int, k: int) -> CascadeRep:
    _require_positive(m, k)
    return CascadeRep(terms=_plain_terms(m, k), value=m, flavor="plain")


def color_rep(m: int, k: int, r: int) -> CascadeRep:
    _require_positive(m, k)
    if r < k:
        raise input_error("The colored cascade needs r >= k.", k=k, r=r)
    terms: list[tuple[int, int]] = []
    rem = m
    for i in range(k):
        if rem == 0:
            break
        top = greatest_turan_top(rem, k - i, r - i)
        terms.append((top, k - i))
        rem -= turan_count(top, k - i, r - i)
    return CascadeRep(terms=tuple(terms), value=m, flavor="colored", r=r)


def two_term_rep(q: int, k: int) -> TwoTermRep:
    if k < 2:
        raise input_error("two_term_rep needs k >= 2.", k=k)
    rep = kk_rep(q, k)
    a = rep.terms[0][0]
    if len(rep.terms) == 1:
        return TwoTermRep(a=a, b=k - 2, m=0, k=k)
    b = rep.terms[1][0]
    m = q - binom(a, k) - binom(b, k - 1)
    return TwoTermRep(a=a, b=b, m=m, k=k)


def dim_two_term_rep(q: int, k: int, r: int) -> TwoTermRep:
    if k < 2:
        raise input_error("dim_two_term_rep needs k >= 2.", k=k)
    rep = color_rep(q, k, r)
    a = rep.terms[0][0]
    if len(rep.terms) == 1:
        return TwoTermRep(a=a, b=k - 2, m=0, k=k, flavor="colored", r=r)
    b = rep.terms[1][0]
    m = q - turan_count(a, k, r) - turan_count(b, k - 1, r - 1)
    return TwoTermRep(a=a, b=b, m=m, k=k, flavor="colored", r=r)


def flag_rep(m: int, k: int) -> FlagRep:
    if k < 3:
        raise make_error(
            error_code="FLAG_006",
            message="The flag representation is only defined for k >= 3.",
            details={"m": m, "k": k},
            recovery_hint="Use kk_shadow for k < 3.",
        )
    _require_positive(m, k)
    n_k = greatest_binom_top(m, k)
    rem = m - binom(n_k, k)
    if rem == 0:
        return FlagRep(n_k=n_k, n_k1=None, a_terms=(), k=k, value=m)
    n_k1 = greatest_binom_top(rem, k - 1)
    rem -= binom(n_k1, k - 1)
    a_terms = _plain_terms(rem, k - 1) if rem > 0 else ()
    return FlagRep(n_k=n_k, n_k1=n_k1, a_terms=a_terms, k=k, value=m)


def evaluate(rep: CascadeRep | TwoTermRep | FlagRep) -> int:
    """Recompute the integer a representation stands for."""
    if isinstance(rep, CascadeRep):
        if rep.flavor == "plain":
            return sum(binom(top, bottom) for top, bottom in rep.terms)
        assert rep.r is not None
        k = rep.terms[0][1] if rep.terms else 0
        return sum(turan_count(top, bottom, rep.r - (k - bottom)) for top, bottom in rep.terms)
    if isinstance(rep, TwoTermRep):
        if rep.flavor == "plain":
            return binom(rep.a, rep.k) + binom(rep.b, rep.k - 1) + rep.m
        assert rep.r is not None
        return turan_count(rep.a, rep.k, rep.r) + turan_count(rep.b, rep.k - 1, rep.r - 1) + rep.m
    total = binom(rep.n_k, rep.k)
    if rep.n_k1 is not None:
        total += binom(rep.n_k1, rep.k - 1)
    return total + sum(binom(top, bottom) for top, bottom in rep.a_terms)


def is_admissible(terms: Terms, k: int, r: int | None = None) -> bool:
    """Check the cascade shape conditions (bottoms, tops, gap) for a term list."""
    if not terms:
        return False
    for i, (top, bottom) in enumerate(terms):
        if bottom != k - i or bottom < 1 or top < bottom:
            return False
        if i + 1 < len(terms):
            nxt = terms[i + 1][0]
            if r is None:
                if not top > nxt:
                    return False
            elif not top - top // (r - i) > nxt:
                return False
    return True


def _term(top: int, bottom: int, colors: int | None) -> int:
    return binom(top, bottom) if colors is None else turan_count(top, bottom, colors)


def _next_limit(top: int, colors: int | None) -> int:
    return top - 1 if colors is None else top - top // colors - 1


def _max_tail(bottom: int, limit: int, colors: int | None) -> int:
    total = 0
    top = limit
    while bottom >= 1 and top >= bottom:
        total += _term(top, bottom, colors)
        top = _next_limit(top, colors)
        bottom -= 1
        if colors is not None:
            colors -= 1
    return total


def _admissible_tails(rem: int, bottom: int, limit: int | None, colors: int | None) -> Iterator[Terms]:
    if rem == 0:
        yield ()
        return
    if bottom < 1:
        return
    if colors is None:
        hi = greatest_binom_top(rem, bottom)
    else:
        hi = greatest_turan_top(rem, bottom, colors)
    if limit is not None:
        hi = min(hi, limit)
    next_colors = None if colors is None else colors - 1
    for top in range(hi, bottom - 1, -1):
        value = _term(top, bottom, colors)
        nxt = _next_limit(top, colors)
        # Smaller tops leave more to cover with a smaller ceiling, so stop at the first miss.
        if rem - value > _max_tail(bottom - 1, nxt, next_colors):
            break
        for tail in _admissible_tails(rem - value, bottom - 1, nxt, next_colors):
            yield ((top, bottom),) + tail


def enumerate_representations(m: int, k: int, r: int | None = None) -> Iterator[Terms]:
    """Every admissible representation of m, found by exhaustive branching.

    Branches are only cut when the remaining amount exceeds the largest sum the
    shape conditions still allow, so uniqueness is checked rather than assumed.
    """
    _require_positive(m, k)
    yield from _admissible_tails(m, k, None, r)
