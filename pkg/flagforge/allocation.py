"""Uneven part sizes for the staged construction.

Row ``j`` of an allocation holds real part sizes a_1^j >= ... >= a_j^j for the
stage-j base. Face count j is the sum, over the largest color L >= j used, of
a_L^L times e_{j-1}(a_1^L, ..., a_{L-1}^L). Rows are first chosen level-equal
from the top down; when a row comes out smaller than the one above it, the two
rows above the break are re-solved with a two-block shape (x, ..., x, y, ...).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

import sympy

from flagforge.config import MIN_PRECISION, get_runtime_config
from flagforge.models import Allocation, FaceVector

LOG = logging.getLogger(__name__)

Row = tuple[Fraction, ...]
DENOMINATOR_LIMIT = 10**6
BISECTION_STEPS = 200


def _elementary(values: Sequence[Fraction], k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    sym = [Fraction(1)] + [Fraction(0)] * k
    for value in values:
        for j in range(k, 0, -1):
            sym[j] += sym[j - 1] * value
    return sym[k]


def level_sum(rows: dict[int, Sequence], j: int) -> Fraction:
    """Face count j produced by ``rows`` (levels L >= j contribute)."""
    total = Fraction(0)
    for level, row in rows.items():
        if level >= j:
            row = [Fraction(x) for x in row]
            total += row[level - 1] * _elementary(row[: level - 1], j - 1)
    return total


def _rational(value: sympy.Expr) -> Fraction:
    return Fraction(str(sympy.Float(value, MIN_PRECISION))).limit_denominator(DENOMINATOR_LIMIT)


def _root(value: Fraction, j: int, precision: int) -> Fraction:
    if value <= 0:
        return Fraction(0)
    exact = sympy.Rational(value.numerator, value.denominator) ** sympy.Rational(1, j)
    return _rational(sympy.N(exact, precision))


def _equal_level(target: FaceVector, rows: dict[int, Row], j: int, precision: int) -> tuple[Row, bool]:
    above = {level: row for level, row in rows.items() if level > j}
    residual = Fraction(target[j]) - level_sum(above, j)
    x = _root(residual, j, precision)
    return (x,) * j, residual >= 0


def _is_monotone(rows: dict[int, Row]) -> bool:
    for i, lower in rows.items():
        for k, upper in rows.items():
            if i < k and any(lower[j] < upper[j] for j in range(i)):
                return False
        if any(lower[j] < lower[j + 1] for j in range(len(lower) - 1)):
            return False
    return True


def _block_rows(x, y, kk: int, r: int) -> tuple[tuple, tuple]:
    return (x,) * kk, (x,) * kk + (y,) * (r - kk)


def _solve_block(
    target: FaceVector, rows: dict[int, Row], kk: int, r: int, precision: int
) -> tuple[Fraction, Fraction] | None:
    """Real (x, y), x > y, meeting face counts kk and r with rows kk, r in block shape."""
    above = {level: row for level, row in rows.items() if level > r}
    need_r = Fraction(target[r]) - level_sum(above, r)
    if need_r <= 0:
        return None
    need_r_s = sympy.Rational(need_r.numerator, need_r.denominator)
    exponent = sympy.Rational(1, r - kk)

    def y_of(x):
        return (need_r_s / x**kk) ** exponent

    def excess(x) -> sympy.Float:
        y = y_of(x)
        row_kk, row_r = _block_rows(x, y, kk, r)
        total = sympy.Float(0, precision)
        for level, row in list(above.items()) + [(r, row_r), (kk, row_kk)]:
            if level < kk:
                continue
            sym = [sympy.Integer(1)] + [sympy.Integer(0)] * (kk - 1)
            for value in row[: level - 1]:
                value = sympy.Rational(value.numerator, value.denominator) if isinstance(value, Fraction) else value
                for j in range(kk - 1, 0, -1):
                    sym[j] += sym[j - 1] * value
            last = row[level - 1]
            last = sympy.Rational(last.numerator, last.denominator) if isinstance(last, Fraction) else last
            total += last * sym[kk - 1]
        return sympy.N(total - target[kk], precision)

    lo = sympy.N(need_r_s ** sympy.Rational(1, r), precision)
    if excess(lo) >= 0:
        return None
    hi = lo * 2
    for _ in range(200):
        if excess(hi) > 0:
            break
        hi *= 2
    else:
        return None
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if excess(mid) > 0:
            hi = mid
        else:
            lo = mid
    x = sympy.N((lo + hi) / 2, precision)
    return _rational(x), _rational(y_of(x))


def _round_block(
    target: FaceVector, rows: dict[int, Row], pinned: dict[int, tuple[int, ...]], x: Fraction, y: Fraction, kk: int, r: int
) -> tuple[int, int]:
    """Integer (xi, yi) near (x, y) minimising the error in face counts kk and r."""
    above: dict[int, Sequence] = {
        level: pinned.get(level, row) for level, row in rows.items() if level > r
    }
    best: tuple[Fraction, int, int] | None = None
    for xi in range(max(math.floor(x) - 1, 1), math.ceil(x) + 2):
        for yi in range(max(math.floor(y) - 1, 0), math.ceil(y) + 2):
            if yi > xi:
                continue
            row_kk, row_r = _block_rows(xi, yi, kk, r)
            trial = dict(above)
            trial[r] = row_r
            trial[kk] = row_kk
            error = abs(level_sum(trial, r) - target[r]) + abs(level_sum(trial, kk) - target[kk])
            if best is None or error < best[0]:
                best = (error, xi, yi)
    assert best is not None
    return best[1], best[2]


def allocate_parts(target: FaceVector, *, precision: int | None = None) -> Allocation:
    """Part-size rows for every stage, repairing monotonicity breaks where possible.

    Stages whose rows were repaired get integer parts pinned; the others are
    left to the balanced Turán choice in the construction.
    """
    if precision is None:
        precision = get_runtime_config().precision
    d = target.d
    alloc = Allocation(mode="auto")
    rows: dict[int, Row] = {}
    repaired: set[int] = set()
    j = d
    while j >= 1:
        row, ok = _equal_level(target, rows, j, precision)
        rows[j] = row
        if not ok:
            alloc.notes.append(f"level {j}: higher levels already exceed c_{j}")
        if j < d and rows[j][0] < rows[j + 1][0]:
            i = j
            kk, r = i + 1, i + 2
            if r > d or kk in repaired:
                alloc.monotone = False
                alloc.notes.append(f"level {i}: a_1^{i} < a_1^{i + 1} and no level above to rebalance")
                LOG.warning("allocation for %s is not monotone at level %d", target.to_list(), i)
                j -= 1
                continue
            solved = _solve_block(target, rows, kk, r, precision)
            if solved is None:
                alloc.monotone = False
                alloc.notes.append(f"levels {kk},{r}: no two-block solution")
                LOG.warning("allocation repair of levels %d,%d found no solution", kk, r)
                j -= 1
                continue
            x, y = solved
            rows[kk], rows[r] = _block_rows(x, y, kk, r)
            xi, yi = _round_block(target, rows, alloc.parts, x, y, kk, r)
            alloc.parts[r] = (xi,) * kk + (yi,) * (r - kk)
            alloc.parts[kk] = (xi,) * kk
            repaired.update((kk, r))
            LOG.info("rebalanced levels %d,%d: x=%s y=%s -> parts %s", kk, r, x, y, alloc.parts[r])
            # Levels below kk depend on the new rows.
            for level in [level for level in rows if level < kk]:
                del rows[level]
            j = kk - 1
            continue
        j -= 1
    alloc.rows = dict(sorted(rows.items()))
    alloc.repaired_levels = tuple(sorted(repaired))
    if alloc.monotone and not _is_monotone(alloc.rows):
        alloc.monotone = False
        alloc.notes.append("rows break a_j^i >= a_j^k after repair")
    if alloc.notes:
        LOG.info("allocation notes: %s", "; ".join(alloc.notes))
    return alloc
