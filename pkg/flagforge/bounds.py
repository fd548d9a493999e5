"""Shadow bounds, construction cost functions, their ceilings and limit constants.

Integer-valued bounds are exact ``int``s. Irrational quantities (cost ceilings,
limit constants, the equal-vertices bound) are returned as exact ``sympy``
expressions; ``to_decimal`` evaluates them at the configured precision. Every
"count <= bound" decision goes through the ``within_*`` / ``meets_*`` predicates,
which raise both sides to integer powers and never round.
"""

from __future__ import annotations

import logging
from typing import Any

import sympy

from flagforge.combinatorics import binom, greatest_binom_top, greatest_turan_top, turan_count
from flagforge.config import MIN_PRECISION
from flagforge.decompose import color_rep, flag_rep, kk_rep
from flagforge.errors import input_error
from flagforge.models import BoundReport, FaceVector

LOG = logging.getLogger(__name__)


def _check_kp(k: int, p: int, *, strict_p: bool = False) -> None:
    low = 2 if strict_p else 1
    if not (k > p >= low):
        raise input_error(f"Need k > p >= {low}.", k=k, p=p)


def _check_m(m: int, *, allow_zero: bool = False) -> None:
    if m < 0 or (m == 0 and not allow_zero):
        raise input_error("m must be >= 1." if not allow_zero else "m must be >= 0.", m=m)


def kk_shadow(m: int, k: int, p: int) -> int:
    """Kruskal-Katona floor for f_{p-1} given f_{k-1} = m."""
    _check_m(m)
    _check_kp(k, p)
    return sum(binom(top, bottom - (k - p)) for top, bottom in kk_rep(m, k).terms)


def kk_upper(m: int, k: int, j: int) -> int:
    """Largest possible f_{k-1+j} given f_{k-1} = m."""
    _check_m(m)
    if j < 1:
        raise input_error("The upward chain needs j >= 1.", j=j)
    return sum(binom(top, bottom + j) for top, bottom in kk_rep(m, k).terms)


def kk_chain(m: int, k: int, i: int, *, direction: str = "down") -> int:
    """Chained shadow bound i steps down, or the upward extremal count i steps up."""
    if direction == "up":
        return kk_upper(m, k, i)
    if direction != "down":
        raise input_error("direction must be 'down' or 'up'.", direction=direction)
    if i < 1 or k - i < 1:
        raise input_error("The downward chain needs 1 <= i < k.", k=k, i=i)
    return kk_shadow(m, k, k - i)


def ffk_bound(m: int, k: int, p: int, r: int) -> int:
    """Colored (Frankl-Füredi-Kalai) floor for f_{p-1} of an r-colored complex."""
    _check_m(m)
    _check_kp(k, p)
    rep = color_rep(m, k, r)
    return sum(turan_count(top, p - i, r - i) for i, (top, _bottom) in enumerate(rep.terms))


def c_cost(m: int, k: int, p: int) -> int:
    _check_m(m, allow_zero=True)
    _check_kp(k, p)
    total = 0
    while m > 0:
        g = greatest_binom_top(m, k - 1)
        total += binom(g, p - 1)
        m -= binom(g, k - 1)
    return total


def d_cost(m: int, k: int, p: int, r: int) -> int:
    _check_m(m, allow_zero=True)
    _check_kp(k, p)
    if r < k:
        raise input_error("d_cost needs r >= k.", k=k, r=r)
    total = 0
    while m > 0:
        j = greatest_turan_top(m, k - 1, r - 1)
        total += turan_count(j, p - 1, r - 1)
        m -= turan_count(j, k - 1, r - 1)
    return total


def c_cost_table(limit: int, k: int, p: int) -> list[int]:
    """[c_cost(m, k, p) for m in 0..limit] in linear time."""
    _check_kp(k, p)
    table = [0] * (limit + 1)
    g = k - 1
    for m in range(1, limit + 1):
        while binom(g + 1, k - 1) <= m:
            g += 1
        table[m] = binom(g, p - 1) + table[m - binom(g, k - 1)]
    return table


def d_cost_table(limit: int, k: int, p: int, r: int) -> list[int]:
    """[d_cost(m, k, p, r) for m in 0..limit] in linear time."""
    _check_kp(k, p)
    if r < k:
        raise input_error("d_cost needs r >= k.", k=k, r=r)
    table = [0] * (limit + 1)
    j = k - 1
    for m in range(1, limit + 1):
        while turan_count(j + 1, k - 1, r - 1) <= m:
            j += 1
        table[m] = turan_count(j, p - 1, r - 1) + table[m - turan_count(j, k - 1, r - 1)]
    return table


def c_cost_upper(m: int, k: int, p: int) -> sympy.Expr:
    _check_m(m, allow_zero=True)
    _check_kp(k, p, strict_p=True)
    return (
        sympy.binomial(k - 1, p - 1)
        * sympy.Rational(k + 1, 2) ** sympy.Rational(k - p, k - 1)
        * sympy.Integer(m) ** sympy.Rational(p - 1, k - 1)
    )


def d_cost_upper(m: int, k: int, p: int, r: int) -> sympy.Expr:
    _check_m(m, allow_zero=True)
    _check_kp(k, p, strict_p=True)
    if r < k:
        raise input_error("d_cost_upper needs r >= k.", k=k, r=r)
    return (
        sympy.binomial(r - 1, p - 1)
        * sympy.binomial(r - 1, k - 1) ** (-sympy.Rational(p - 1, k - 1))
        * sympy.Integer(2) ** (k - 1)
        * sympy.Integer(m) ** sympy.Rational(p - 1, k - 1)
    )


def within_c_cost_upper(c: int, m: int, k: int, p: int) -> bool:
    """Exact test of c <= c_cost_upper(m, k, p)."""
    lhs = c ** (k - 1) * 2 ** (k - p)
    rhs = binom(k - 1, p - 1) ** (k - 1) * (k + 1) ** (k - p) * m ** (p - 1)
    return lhs <= rhs


def c_cost_ceiling(m: int, k: int, p: int) -> sympy.Expr:
    """Ceiling on c_cost that holds for every m >= 0.

    c_cost_upper fails for small m (c_cost(5, 3, 2) = 7 exceeds it). Carrying
    the factor (p-1)/(k-1) from the concavity step and bounding (n+1)/(n-k+2)
    by k instead of (k+1)/2 gives this one.
    """
    _check_m(m, allow_zero=True)
    _check_kp(k, p, strict_p=True)
    return (
        sympy.Rational(k - 1, p - 1)
        * sympy.binomial(k - 1, p - 1)
        * sympy.Integer(k) ** sympy.Rational(k - p, k - 1)
        * sympy.Integer(m) ** sympy.Rational(p - 1, k - 1)
    )


def within_c_cost_ceiling(c: int, m: int, k: int, p: int) -> bool:
    """Exact test of c <= c_cost_ceiling(m, k, p)."""
    lhs = c ** (k - 1) * (p - 1) ** (k - 1)
    rhs = (k - 1) ** (k - 1) * binom(k - 1, p - 1) ** (k - 1) * k ** (k - p) * m ** (p - 1)
    return lhs <= rhs


def within_d_cost_upper(c: int, m: int, k: int, p: int, r: int) -> bool:
    """Exact test of c <= d_cost_upper(m, k, p, r)."""
    lhs = c ** (k - 1) * binom(r - 1, k - 1) ** (p - 1)
    rhs = binom(r - 1, p - 1) ** (k - 1) * 2 ** ((k - 1) ** 2) * m ** (p - 1)
    return lhs <= rhs


def limit_constant_two(k: int, p: int) -> sympy.Expr:
    """lim c_cost(m, k, p) / m^((p-1)/(k-1))."""
    _check_kp(k, p)
    return sympy.factorial(k - 1) ** sympy.Rational(p - 1, k - 1) / sympy.factorial(p - 1)


def limit_constant_dim(r: int, k: int, p: int) -> sympy.Expr:
    """lim d_cost(m, k, p, r) / m^((p-1)/(k-1))."""
    _check_kp(k, p)
    if r < k:
        raise input_error("limit_constant_dim needs r >= k.", k=k, r=r)
    return sympy.binomial(r - 1, p - 1) * sympy.binomial(r - 1, k - 1) ** (-sympy.Rational(p - 1, k - 1))


def equal_vertices_bound(d: int, k: int, p: int, m: int) -> sympy.Expr:
    """Floor for f_{p-1} of a balanced complex with d colors and f_{k-1} = m, equal parts."""
    if not (d >= k >= p >= 1):
        raise input_error("Need d >= k >= p >= 1.", d=d, k=k, p=p)
    _check_m(m, allow_zero=True)
    return (
        sympy.binomial(d, p)
        * sympy.binomial(d, k) ** (-sympy.Rational(p, k))
        * sympy.Integer(m) ** sympy.Rational(p, k)
    )


def meets_equal_vertices(f: int, d: int, k: int, p: int, m: int) -> bool:
    """Exact test of f >= equal_vertices_bound(d, k, p, m)."""
    return f**k * binom(d, k) ** p >= binom(d, p) ** k * m**p


def ratio_to_limit(value: int, m: int, k: int, p: int) -> sympy.Expr:
    """value / m^((p-1)/(k-1)), the quantity whose limit the constants describe."""
    return sympy.Integer(value) / sympy.Integer(m) ** sympy.Rational(p - 1, k - 1)


def to_decimal(expr: Any, precision: int = MIN_PRECISION) -> str:
    if isinstance(expr, int):
        return str(expr)
    return str(sympy.N(expr, max(precision, MIN_PRECISION)))


def flag_lower_bound(m: int, k: int, p: int) -> BoundReport:
    """Floor for f_{p-1} of a flag complex with f_{k-1} = m (k >= 3).

    The simplex branch covers complexes containing an (n_k - 1)-simplex; the
    colored branch applies FFK with r = n_k - 1 to those that do not.
    """
    _check_m(m)
    _check_kp(k, p)
    rep = flag_rep(m, k)
    simplex = binom(rep.n_k, p)
    if rep.n_k1 is not None:
        simplex += binom(rep.n_k1, p - 1)
    simplex += sum(binom(top, bottom - (k - p)) for top, bottom in rep.a_terms)

    r = rep.n_k - 1
    colored: int | None = None
    if r >= k:
        colored = ffk_bound(m, k, p, r)

    if colored is not None and colored < simplex:
        value, branch = colored, "colored_branch"
    else:
        value, branch = simplex, "simplex_branch"
    return BoundReport(
        kind="flag_two_branch",
        value=value,
        branch_taken=branch,
        details={"simplex_branch": simplex, "colored_branch": colored, "r": r},
    )


def flag_or_shadow_bound(m: int, k: int, p: int) -> BoundReport:
    """flag_lower_bound where defined, the plain shadow bound for k < 3."""
    if k < 3:
        return BoundReport(kind="kk_shadow", value=kk_shadow(m, k, p), details={"fallback": True})
    return flag_lower_bound(m, k, p)


def diagnose_face_vector(target: FaceVector) -> list[dict[str, Any]]:
    """Necessary conditions on consecutive face numbers that ``target`` violates.

    Checks the shadow bound, the flag two-branch bound and FFK at r = d for each
    pair (f_{k-2}, f_{k-1}). An empty list means none of them rules the target out.
    """
    d = target.d
    violations: list[dict[str, Any]] = []
    for k in range(2, d + 1):
        m = target[k]
        have = target[k - 1]
        if m < 1:
            continue
        checks: list[tuple[str, int]] = [("kk_shadow", kk_shadow(m, k, k - 1))]
        if k >= 3:
            report = flag_lower_bound(m, k, k - 1)
            checks.append((f"flag_two_branch:{report.branch_taken}", report.value))
        checks.append((f"ffk_r{d}", ffk_bound(m, k, k - 1, d)))
        for name, floor in checks:
            if have < floor:
                violations.append({"bound": name, "k": k, "f_index": k - 2, "have": have, "need": floor})
    if violations:
        LOG.info("target %s violates %d necessary bound(s)", list(target.entries), len(violations))
    return violations
