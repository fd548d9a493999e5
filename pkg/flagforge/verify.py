"""Independent oracles: exhaustive small-graph searches and closed-form cross-checks.

Graphs in the search are raw adjacency tuples, one bitset per vertex.
Isomorphism classes are named by a canonical adjacency tuple found by
individualization-refinement. Every graph on n vertices is a one-vertex
extension of some graph on n - 1 vertices, so growing canonical
representatives level by level reaches every class.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import sympy

from flagforge.allocation import allocate_parts
from flagforge.bounds import (
    c_cost,
    c_cost_table,
    d_cost,
    d_cost_table,
    ffk_bound,
    flag_or_shadow_bound,
    kk_shadow,
    limit_constant_dim,
    limit_constant_two,
    ratio_to_limit,
    within_c_cost_ceiling,
    within_c_cost_upper,
    within_d_cost_upper,
)
from flagforge.combinatorics import binom, greatest_binom_top, turan_count, turan_parts, turan_recurrence
from flagforge.complex import (
    VertexColoredGraph,
    adjacency_clique_counts,
    build_multipartite,
    clique_counts,
    clique_f_vector,
)
from flagforge.config import MAX_SEARCH_VERTICES, get_runtime_config
from flagforge.construct import (
    construct_dim,
    construct_hvec,
    construct_main,
    construct_two_face,
    extra_vertex_faces,
    stage_extra_vertices,
    two_face_extra_vertices,
)
from flagforge.decompose import color_rep, dim_two_term_rep, enumerate_representations, kk_rep, two_term_rep
from flagforge.errors import input_error, make_error
from flagforge.models import (
    FaceVector,
    HVector,
    SearchReport,
    SuiteCheck,
    SuiteRanges,
    SuiteReport,
    VerifyOutcome,
)

LOG = logging.getLogger(__name__)

Adjacency = tuple[int, ...]
TuranFn = Callable[[int, int, int], int]


# --- canonical form -------------------------------------------------------


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Split cells by neighbour counts into every cell until the partition is equitable."""
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        refined: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                signature = tuple((adj[v] & mask).bit_count() for mask in masks)
                groups.setdefault(signature, []).append(v)
            refined.extend(groups[signature] for signature in sorted(groups))
        if len(refined) == len(cells):
            return refined
        cells = refined


def _relabel(adj: Sequence[int], order: Sequence[int]) -> Adjacency:
    position = {v: i for i, v in enumerate(order)}
    out = []
    for v in order:
        mask = 0
        rest = adj[v]
        while rest:
            low = rest & -rest
            rest ^= low
            mask |= 1 << position[low.bit_length() - 1]
        out.append(mask)
    return tuple(out)


def _twins(adj: Sequence[int], u: int, v: int) -> bool:
    return adj[u] & ~(1 << v) == adj[v] & ~(1 << u)


def _search_leaves(adj: Sequence[int], cells: list[list[int]], best: Adjacency | None) -> Adjacency:
    cells = _refine(adj, cells)
    target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
    if target is None:
        leaf = _relabel(adj, [cell[0] for cell in cells])
        return leaf if best is None or leaf < best else best
    cell = cells[target]
    tried: list[int] = []
    for v in cell:
        # Swapping twins is an automorphism that fixes the partition.
        if any(_twins(adj, u, v) for u in tried):
            continue
        tried.append(v)
        branch = cells[:target] + [[v], [u for u in cell if u != v]] + cells[target + 1 :]
        best = _search_leaves(adj, branch, best)
    assert best is not None
    return best


def canonical_adjacency(adj: Sequence[int]) -> Adjacency:
    """Smallest relabelled adjacency tuple over the refinement tree; equal iff isomorphic."""
    if not adj:
        return ()
    return _search_leaves(adj, [list(range(len(adj)))], None)


def canonical_form(g: VertexColoredGraph) -> Adjacency:
    """Canonical adjacency of the underlying graph; colors are ignored."""
    return canonical_adjacency(g.adjacency)


def adjacency_edges(adj: Sequence[int]) -> list[tuple[int, int]]:
    return [(u, v) for u, mask in enumerate(adj) for v in range(u + 1, len(adj)) if mask >> v & 1]


def graph_from_adjacency(adj: Sequence[int]) -> VertexColoredGraph:
    return VertexColoredGraph([1] * len(adj), adjacency_edges(adj))


# --- generation -----------------------------------------------------------


def _check_budget(max_vertices: int) -> None:
    if max_vertices < 0:
        raise input_error("max_vertices must be >= 0.", max_vertices=max_vertices)
    if max_vertices > MAX_SEARCH_VERTICES:
        raise make_error(
            error_code="FLAG_004",
            message="Exhaustive search is limited to small vertex counts.",
            details={"max_vertices": max_vertices, "limit": MAX_SEARCH_VERTICES},
            recovery_hint=f"Use --max-vertices {MAX_SEARCH_VERTICES} or less.",
        )


def _extensions(parent: Adjacency) -> Iterator[Adjacency]:
    n = len(parent)
    new_bit = 1 << n
    for subset in range(1 << n):
        yield tuple(mask | new_bit if subset >> i & 1 else mask for i, mask in enumerate(parent)) + (subset,)


def _grow(
    parents: Sequence[Adjacency], fix_card: int, fix_count: int | None, max_card: int
) -> dict[Adjacency, tuple[int, ...]]:
    """Canonical children of ``parents`` with their clique counts, pruned on the fixed count."""
    found: dict[Adjacency, tuple[int, ...]] = {}
    for parent in parents:
        for child in _extensions(parent):
            counts = adjacency_clique_counts(child, max_card)
            if fix_count is not None and counts[fix_card] > fix_count:
                continue
            key = canonical_adjacency(child)
            if key not in found:
                found[key] = tuple(counts)
    return found


def _grow_level(
    parents: list[Adjacency],
    fix_card: int,
    fix_count: int | None,
    max_card: int,
    pool: ProcessPoolExecutor | None,
    workers: int,
) -> dict[Adjacency, tuple[int, ...]]:
    if pool is None or len(parents) < 2 * workers:
        return _grow(parents, fix_card, fix_count, max_card)
    chunks = [parents[i::workers] for i in range(workers)]
    merged: dict[Adjacency, tuple[int, ...]] = {}
    for part in pool.map(_grow, chunks, repeat(fix_card), repeat(fix_count), repeat(max_card)):
        for key, counts in part.items():
            merged.setdefault(key, counts)
    return merged


def generate_graphs(max_vertices: int) -> dict[int, list[Adjacency]]:
    """Canonical representatives of every graph on 0..max_vertices vertices, keyed by vertex count."""
    _check_budget(max_vertices)
    levels: dict[int, list[Adjacency]] = {0: [()]}
    for n in range(1, max_vertices + 1):
        levels[n] = sorted(_grow(levels[n - 1], 1, None, 1))
    return levels


def search_flag_profiles(
    fix_card: int,
    fix_count: int,
    report_card: int,
    max_vertices: int | None = None,
    *,
    workers: int | None = None,
) -> SearchReport:
    """Values of f_{report_card-1} over all graphs on <= max_vertices vertices with f_{fix_card-1} = fix_count.

    The result is exhaustive within the vertex budget only. Graphs whose fixed
    count already exceeds ``fix_count`` are not extended, since counts never
    drop when a vertex is added.
    """
    if fix_card < 1 or report_card < 1:
        raise input_error("Cardinalities must be >= 1.", fix_card=fix_card, report_card=report_card)
    if fix_count < 0:
        raise input_error("fix_count must be >= 0.", fix_count=fix_count)
    config = get_runtime_config()
    if max_vertices is None:
        max_vertices = config.search_max_vertices
    _check_budget(max_vertices)
    if workers is None:
        workers = config.threads
    max_card = max(fix_card, report_card)

    report = SearchReport(fix_card=fix_card, fix_count=fix_count, report_card=report_card, max_vertices=max_vertices)
    level: dict[Adjacency, tuple[int, ...]] = {(): tuple(adjacency_clique_counts((), max_card))}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in range(max_vertices + 1):
            if n > 0:
                level = _grow_level(sorted(level), fix_card, fix_count, max_card, pool, workers)
            report.graphs_examined += len(level)
            hits = 0
            for key in sorted(level):
                counts = level[key]
                if counts[fix_card] != fix_count:
                    continue
                hits += 1
                value = counts[report_card]
                if value not in report.attained:
                    report.attained[value] = adjacency_edges(key)
                    report.witness_vertices[value] = n
            LOG.info("search level %d: %d classes, %d meet the constraint", n, len(level), hits)
    finally:
        if pool is not None:
            pool.shutdown()

    if report.attained:
        top = max(report.attained)
        report.excluded_in_domain = [value for value in range(top) if value not in report.attained]
    return report


# --- single graphs ----------------------------------------------------------


def verify_graph(g: VertexColoredGraph, expected: FaceVector, *, threads: int | None = None) -> VerifyOutcome:
    got = clique_f_vector(g, threads=threads).entries
    for index in range(max(len(got), len(expected))):
        have = got[index] if index < len(got) else 0
        want = expected[index] if index < len(expected) else 0
        if have != want:
            LOG.info("face count %d mismatch: got %d, want %d", index, have, want)
            return VerifyOutcome(
                passed=False, f_vector=got, expected=expected.entries, index=index, got=have, want=want
            )
    return VerifyOutcome(passed=True, f_vector=got, expected=expected.entries)


# --- consistency suite ----------------------------------------------------

LIMIT_PAIRS = ((3, 2), (4, 2), (4, 3), (5, 3))
LIMIT_M = 10**6
LIMIT_TOLERANCE = sympy.Rational(5, 100)
DIM_LIMIT_TOLERANCE = sympy.Rational(2, 100)
WIDE_PALETTE_TOLERANCE = sympy.Rational(1, 100)
WIDE_PALETTE = 1000


def golden_complexes() -> dict[str, VertexColoredGraph]:
    """Reference flag complexes: worked constructions, a Turán graph and a simplex."""
    golden: dict[str, VertexColoredGraph] = {
        "turan_54_3": build_multipartite(turan_parts(54, 3)),
        "simplex_5": build_multipartite((1,) * 5),
    }
    builds = {
        "main_1_100_1000_2000": lambda: construct_main(FaceVector((1, 100, 1000, 2000)), threads=1),
        "main_1_62_1161_5832": lambda: construct_main(
            FaceVector((1, 62, 1161, 5832)), allocate_parts(FaceVector((1, 62, 1161, 5832))), threads=1
        ),
        "hvec_1_2_1": lambda: construct_hvec(HVector((1, 2, 1)), threads=1),
        "hvec_1_3_3_1": lambda: construct_hvec(HVector((1, 3, 3, 1)), threads=1),
    }
    for name, build in builds.items():
        result = build()
        if result.graph is not None:
            golden[name] = result.graph
        else:
            LOG.warning("golden construction %s failed: %s", name, result.plan.failure)
    return golden


def _close(value: sympy.Expr, limit: sympy.Expr, tolerance: sympy.Expr) -> bool:
    return bool(sympy.Abs(sympy.N(value / limit - 1, 60)) <= tolerance)


def _check_turan_recurrence(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for r in range(1, ranges.turan_r + 1):
        for k in range(ranges.turan_k + 1):
            for n in range(1, ranges.turan_n + 1):
                got, want = turan(n, k, r), turan_recurrence(n, k, r)
                check.record(got == want, n=n, k=k, r=r, formula=got, recurrence=want)


def _check_turan_brute_force(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    top = max(ranges.turan_k, 1)
    for r in range(1, ranges.turan_r + 1):
        for n in range(ranges.brute_force_n + 1):
            counts = clique_counts(build_multipartite(turan_parts(n, r)), top, threads=1)
            for k in range(top + 1):
                got = turan(n, k, r)
                check.record(got == counts[k], n=n, k=k, r=r, formula=got, brute_force=counts[k])


def _check_plain_cascades(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for k in range(1, ranges.cascade_k + 1):
        for m in range(1, ranges.cascade_m + 1):
            reps = list(enumerate_representations(m, k))
            greedy = kk_rep(m, k).terms
            check.record(reps == [greedy], m=m, k=k, found=len(reps))


def _check_colored_cascades(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for k in range(1, ranges.cascade_k + 1):
        for r in range(k, ranges.cascade_r + 1):
            for m in range(1, ranges.cascade_m + 1):
                reps = list(enumerate_representations(m, k, r))
                greedy = color_rep(m, k, r).terms
                check.record(reps == [greedy], m=m, k=k, r=r, found=len(reps))


def _check_c_cost_ceiling(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    step = max(1, ranges.c_cost_m // 100)
    for k in range(3, ranges.c_cost_k + 1):
        for p in range(2, k):
            table = c_cost_table(ranges.c_cost_m, k, p)
            above_stated = 0
            for m in range(1, ranges.c_cost_m + 1):
                check.record(within_c_cost_ceiling(table[m], m, k, p), m=m, k=k, p=p, cost=table[m])
                if not within_c_cost_upper(table[m], m, k, p):
                    above_stated += 1
            if above_stated:
                LOG.info("c_cost(k=%d, p=%d) exceeds c_cost_upper at %d values of m", k, p, above_stated)
            for m in range(0, ranges.c_cost_m + 1, step):
                check.record(table[m] == c_cost(m, k, p), m=m, k=k, p=p, table=table[m])


def _check_d_cost_ceiling(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    step = max(1, ranges.d_cost_m // 100)
    for r in range(3, ranges.d_cost_r + 1):
        for k in range(3, r + 1):
            for p in range(2, k):
                table = d_cost_table(ranges.d_cost_m, k, p, r)
                for m in range(1, ranges.d_cost_m + 1):
                    check.record(within_d_cost_upper(table[m], m, k, p, r), m=m, k=k, p=p, r=r, cost=table[m])
                for m in range(0, ranges.d_cost_m + 1, step):
                    check.record(table[m] == d_cost(m, k, p, r), m=m, k=k, p=p, r=r, table=table[m])


def _check_limits(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    value = c_cost(LIMIT_M, 3, 2)
    ratio = ratio_to_limit(value, LIMIT_M, 3, 2)
    check.record(_close(ratio, limit_constant_two(3, 2), LIMIT_TOLERANCE), k=3, p=2, m=LIMIT_M, ratio=str(sympy.N(ratio, 12)))

    # Single-term points m = binom(g, k-1) sit on the limiting curve up to O(1/g).
    for k, p in LIMIT_PAIRS:
        g = greatest_binom_top(LIMIT_M, k - 1)
        m = binom(g, k - 1)
        ratio = ratio_to_limit(c_cost(m, k, p), m, k, p)
        check.record(_close(ratio, limit_constant_two(k, p), LIMIT_TOLERANCE), k=k, p=p, m=m, ratio=str(sympy.N(ratio, 12)))

    ratio = ratio_to_limit(d_cost(LIMIT_M, 3, 2, 4), LIMIT_M, 3, 2)
    check.record(
        _close(ratio, limit_constant_dim(4, 3, 2), DIM_LIMIT_TOLERANCE), r=4, k=3, p=2, m=LIMIT_M, ratio=str(sympy.N(ratio, 12))
    )
    for k, p in LIMIT_PAIRS:
        wide = limit_constant_dim(WIDE_PALETTE, k, p)
        check.record(_close(wide, limit_constant_two(k, p), WIDE_PALETTE_TOLERANCE), r=WIDE_PALETTE, k=k, p=p)


def _check_golden_bounds(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for name, g in golden_complexes().items():
        f = clique_f_vector(g, threads=1)
        d = f.d
        for k in range(2, d + 1):
            m = f[k]
            for p in range(1, k):
                floor = kk_shadow(m, k, p)
                check.record(f[p] >= floor, complex=name, bound="kk_shadow", k=k, p=p, have=f[p], need=floor)
                floor = flag_or_shadow_bound(m, k, p).value
                check.record(f[p] >= floor, complex=name, bound="flag", k=k, p=p, have=f[p], need=floor)
            floor = ffk_bound(m, k, k - 1, d)
            check.record(f[k - 1] >= floor, complex=name, bound=f"ffk_r{d}", k=k, have=f[k - 1], need=floor)


def _check_two_face_threshold(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for k in range(2, ranges.threshold_k + 1):
        for p in range(1, k):
            for m in range(1, ranges.threshold_m + 1):
                rep = two_term_rep(m, k)
                q = binom(rep.a, p) + binom(rep.b, p - 1) + c_cost(rep.m, k, p)
                result = construct_two_face(k, p, m, q, threads=1)
                check.record(result.succeeded, k=k, p=p, m=m, q=q)


def _check_dim_threshold(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    for r in range(2, ranges.threshold_r + 1):
        for k in range(2, min(ranges.threshold_k, r) + 1):
            for p in range(1, k):
                for m in range(1, ranges.dim_threshold_m + 1):
                    rep = dim_two_term_rep(m, k, r)
                    q = turan_count(rep.a, p, r) + turan_count(rep.b, p - 1, r - 1) + d_cost(rep.m, k, p, r)
                    result = construct_dim(r, k, p, m, q, threads=1)
                    check.record(result.succeeded, r=r, k=k, p=p, m=m, q=q)


def _dim_base_top(n: int, m: int, k: int, r: int) -> int:
    """Smallest top >= n whose next Turán vertex adds more than m k-cliques."""
    while turan_count(n + 1, k, r) - turan_count(n, k, r) <= m:
        n += 1
    return n


def _check_cost_tails(check: SuiteCheck, ranges: SuiteRanges, turan: TuranFn) -> None:
    # Every base is sized so the cascade remainder after it is exactly m.
    for k in range(2, ranges.tail_k + 1):
        records_by_m = {m: two_face_extra_vertices(k, m) for m in range(1, ranges.tail_m + 1)}
        for p in range(1, k):
            for m, records in records_by_m.items():
                tail = sum(binom(e.n, p - 1) for e in records)
                want = c_cost(m, k, p)
                check.record(tail == want, kind="two_face", k=k, p=p, m=m, tail=tail, cost=want)
                if m > ranges.tail_graph_m:
                    continue
                top = greatest_binom_top(m, k - 1) + 1
                result = construct_two_face(k, p, binom(top, k) + m, binom(top, p) + tail, threads=1)
                counts = clique_counts(result.graph, k, threads=1) if result.graph is not None else None
                ok = counts is not None and counts[k] - binom(top, k) == m and counts[p] - binom(top, p) == want
                check.record(ok, kind="two_face_graph", k=k, p=p, m=m, cost=want)

    for r in range(3, ranges.tail_r + 1):
        for k in range(3, min(ranges.tail_k, r) + 1):
            top = 0
            for m in range(1, ranges.tail_m + 1):
                top = _dim_base_top(top, m, k, r)
                # One more vertex per part leaves room for every link.
                parts = turan_parts(top + r, r)
                records = stage_extra_vertices(parts, k, m)
                for p in range(1, k):
                    tail = extra_vertex_faces(records, p, r)
                    want = d_cost(m, k, p, r)
                    check.record(tail == want, kind="dim", r=r, k=k, p=p, m=m, tail=tail, cost=want)
                    if m > ranges.tail_graph_m:
                        continue
                    n0 = top + r
                    result = construct_dim(r, k, p, turan_count(n0, k, r) + m, turan_count(n0, p, r) + tail, threads=1)
                    counts = clique_counts(result.graph, k, threads=1) if result.graph is not None else None
                    ok = (
                        counts is not None
                        and counts[k] - turan_count(n0, k, r) == m
                        and counts[p] - turan_count(n0, p, r) == want
                    )
                    check.record(ok, kind="dim_graph", r=r, k=k, p=p, m=m, cost=want)


SUITE_CHECKS: tuple[tuple[str, Callable[[SuiteCheck, SuiteRanges, TuranFn], None]], ...] = (
    ("turan_formula_vs_recurrence", _check_turan_recurrence),
    ("turan_formula_vs_brute_force", _check_turan_brute_force),
    ("plain_cascade_uniqueness", _check_plain_cascades),
    ("colored_cascade_uniqueness", _check_colored_cascades),
    ("c_cost_ceiling", _check_c_cost_ceiling),
    ("d_cost_ceiling", _check_d_cost_ceiling),
    ("limit_convergence", _check_limits),
    ("golden_complex_bounds", _check_golden_bounds),
    ("two_face_threshold", _check_two_face_threshold),
    ("dim_threshold", _check_dim_threshold),
    ("cost_vs_construction_tail", _check_cost_tails),
)


def bound_consistency_suite(
    ranges: SuiteRanges | None = None,
    *,
    turan: TuranFn = turan_count,
    only: Sequence[str] | None = None,
) -> SuiteReport:
    """Run every cross-check and return the pass/fail ledger.

    ``turan`` replaces the Turán formula under test; the recurrence and the
    brute-force counts it is compared against do not use it.
    """
    ranges = ranges or SuiteRanges()
    known = {name for name, _ in SUITE_CHECKS}
    if only is not None:
        unknown = sorted(set(only) - known)
        if unknown:
            raise input_error("Unknown suite check.", unknown=unknown, known=sorted(known))
    report = SuiteReport(ranges=ranges)
    for name, run in SUITE_CHECKS:
        if only is not None and name not in only:
            continue
        check = SuiteCheck(name=name)
        run(check, ranges, turan)
        LOG.info("suite %s: %d cases, %d failed", name, check.cases, check.failed)
        report.checks.append(check)
    return report
