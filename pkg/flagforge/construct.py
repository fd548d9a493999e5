"""Explicit flag complexes with prescribed face numbers.

Every builder grows a ``VertexColoredGraph`` from a base (a clique, a Turán
graph or a complete multipartite graph with pinned part sizes) plus extra
vertices whose links are Turán graphs inside the base. Face numbers are tracked
in closed form while building and checked against a brute-force clique count
before anything is returned.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from flagforge.bounds import diagnose_face_vector
from flagforge.combinatorics import (
    binom,
    greatest_binom_top,
    greatest_turan_top,
    multipartite_count,
    multipartite_profile,
    turan_count,
    turan_parts,
)
from flagforge.complex import (
    VertexColoredGraph,
    build_multipartite,
    clique_counts,
    f_to_h_entries,
    plus_construction,
)
from flagforge.errors import input_error, make_error
from flagforge.models import (
    Allocation,
    ConstructionFailure,
    ConstructionPlan,
    ExtraVertexRecord,
    FaceVector,
    HVector,
    StageRecord,
)

LOG = logging.getLogger(__name__)


@dataclass
class ConstructionResult:
    plan: ConstructionPlan
    graph: VertexColoredGraph | None = None

    @property
    def succeeded(self) -> bool:
        return self.plan.succeeded


def _self_verification_error(kind: str, card: int, got: int, want: int) -> Exception:
    return make_error(
        error_code="FLAG_900",
        message="Brute-force face count disagrees with the construction ledger.",
        details={"construction": kind, "card": card, "got": got, "want": want},
        recovery_hint="This is a bug in flagforge; please report the target that triggered it.",
    )


def _check_counts(g: VertexColoredGraph, kind: str, expected: dict[int, int], *, threads: int | None) -> None:
    counts = clique_counts(g, max(expected), threads=threads)
    for card, want in sorted(expected.items()):
        if counts[card] != want:
            raise _self_verification_error(kind, card, counts[card], want)


# --- link selection -------------------------------------------------------


@dataclass
class _Extra:
    record: ExtraVertexRecord
    color_index: int
    links: list[list[int]]
    paired: bool = False

    @property
    def neighbors(self) -> list[int]:
        return sorted(v for block in self.links for v in block)


def _arrangements(total: int, colors: Sequence[int]) -> Iterator[dict[int, int]]:
    """Turán part sizes of ``total`` laid onto ``colors``, big parts to earlier colors first."""
    if not colors:
        if total == 0:
            yield {}
        return
    sizes = turan_parts(total, len(colors))
    big, small = sizes[0], sizes[-1]
    if big == small:
        yield {x: big for x in colors}
        return
    nbig = sizes.count(big)
    for chosen in combinations(range(len(colors)), nbig):
        picked = set(chosen)
        yield {x: big if i in picked else small for i, x in enumerate(colors)}


def _select_link(base: list[list[int]], n: int) -> tuple[int, list[list[int]]] | None:
    """Exclude a color (last first) and take a T_{n, r-1} from the lowest indices."""
    r = len(base)
    for c in reversed(range(r)):
        others = sorted((x for x in range(r) if x != c), key=lambda x: (-len(base[x]), x))
        sizes = dict(zip(others, turan_parts(n, r - 1)))
        if all(sizes[x] <= len(base[x]) for x in others):
            links = [base[x][: sizes[x]] if x != c else [] for x in range(r)]
            return c, links
    return None


def _select_paired_link(
    base: list[list[int]], n: int, p: int, prev: _Extra
) -> tuple[int, list[list[int]]] | None:
    """Link T_{n, r-1} sharing a T_{p, r-2} with the previous extra vertex's link."""
    r = len(base)
    prev_c = prev.color_index
    shared_pool = prev.links
    for c in reversed(range(r)):
        if c == prev_c:
            continue
        others = sorted((x for x in range(r) if x != c), key=lambda x: (-len(base[x]), x))
        overlap_colors = sorted(
            (x for x in range(r) if x not in (c, prev_c)), key=lambda x: (-len(shared_pool[x]), x)
        )
        for sizes in _arrangements(n, others):
            for overlap in _arrangements(p, overlap_colors):
                feasible = True
                for x in others:
                    o, t, held = overlap.get(x, 0), sizes[x], len(shared_pool[x])
                    if o > held or o > t or t - o > len(base[x]) - held:
                        feasible = False
                        break
                if not feasible:
                    continue
                links: list[list[int]] = [[] for _ in range(r)]
                for x in others:
                    o, t = overlap.get(x, 0), sizes[x]
                    held = set(shared_pool[x])
                    shared = shared_pool[x][len(shared_pool[x]) - o :] if o else []
                    fresh = [v for v in base[x] if v not in held][: t - o]
                    links[x] = sorted(shared + fresh)
                return c, links
    return None


class _LinkCapacity(Exception):
    def __init__(self, index: int, n: int, capacity: int) -> None:
        super().__init__(f"no color assignment fits a link of {n} vertices")
        self.index = index
        self.n = n
        self.capacity = capacity


def _grow_stage(base: list[list[int]], card: int, budget: int, *, pairing: bool) -> list[_Extra]:
    """Extra vertices using up ``budget`` card-cliques on top of the base.

    Vertex i gets a link T_{n_i, r-1} with n_i greatest such that
    turan(n_i, card-1, r-1) <= m_{i-1}; with pairing it may also be joined to
    vertex i-1, sharing a T_{p_i, r-2} of their links.
    """
    r = len(base)
    n0 = sum(len(block) for block in base)
    extras: list[_Extra] = []
    m = budget
    while m > 0:
        index = len(extras) + 1
        n_i = greatest_turan_top(m, card - 1, r - 1)
        rem = m - turan_count(n_i, card - 1, r - 1)
        q_i = greatest_turan_top(rem, card - 2, r - 2) if rem > 0 and card >= 3 else None

        chosen: tuple[int, list[list[int]]] | None = None
        p_i, rule = -1, "none"
        prev = extras[-1] if extras else None
        if pairing and prev is not None and q_i is not None:
            n_prev = prev.record.n
            lhs = n0 - n0 // r - (n0 + 1) // r + q_i
            rhs = n_prev - n_prev // (r - 1) + n_i - n_i // (r - 1)
            floor_p = max(card - 2, 1)
            if lhs >= rhs:
                candidates, rule = list(range(q_i, floor_p - 1, -1)), "inequality"
            elif n0 + q_i < n_prev + n_i:
                candidates = []
            else:
                candidates, rule = list(range(q_i, floor_p - 1, -1)), "middle_zone"
            for p in candidates:
                chosen = _select_paired_link(base, n_i, p, prev)
                if chosen is not None:
                    p_i = p
                    break
            if chosen is None:
                rule = "none"
            elif rule == "middle_zone":
                LOG.warning("extra vertex %d paired in the middle zone with overlap %d (q=%d)", index, p_i, q_i)
            elif p_i != q_i:
                LOG.info("extra vertex %d paired with reduced overlap %d (q=%d)", index, p_i, q_i)

        if chosen is None:
            chosen = _select_link(base, n_i)
        if chosen is None:
            capacity = max(sum(len(base[x]) for x in range(r) if x != c) for c in range(r))
            raise _LinkCapacity(index, n_i, capacity)

        color_index, links = chosen
        m_i = rem - turan_count(p_i, card - 2, r - 2)
        record = ExtraVertexRecord(
            index=index, n=n_i, q=q_i, p=p_i, m=m_i, color=color_index + 1, pairing=rule
        )
        LOG.debug("extra %d: n=%d q=%s p=%d m=%d excluded color %d", index, n_i, q_i, p_i, m_i, color_index + 1)
        extras.append(_Extra(record=record, color_index=color_index, links=links, paired=p_i >= 0))
        m = m_i
    return extras


def _part_blocks(parts: Sequence[int]) -> list[list[int]]:
    """Vertex ids per part for a graph laid out by ``build_multipartite``."""
    blocks: list[list[int]] = []
    start = 0
    for size in parts:
        blocks.append(list(range(start, start + size)))
        start += size
    return blocks


def _extras_faces(extras: Sequence[_Extra], card: int, colors: int) -> int:
    return extra_vertex_faces([e.record for e in extras], card, colors)


def extra_vertex_faces(records: Sequence[ExtraVertexRecord], card: int, colors: int) -> int:
    """card-cliques through the extra vertices of an r-colored stage, pairing edges included."""
    return sum(
        turan_count(e.n, card - 1, colors - 1) + turan_count(e.p, card - 2, colors - 2)
        for e in records
    )


def _attach_extras(g: VertexColoredGraph, extras: Sequence[_Extra], colors: Sequence[int]) -> None:
    previous: int | None = None
    for extra in extras:
        neighbors = extra.neighbors
        if extra.paired and previous is not None:
            neighbors.append(previous)
        previous = g.add_vertex(colors[extra.color_index], neighbors)


# --- two face numbers -----------------------------------------------------


def two_face_extra_vertices(k: int, budget: int, color: int = 0) -> list[ExtraVertexRecord]:
    """One-color extra vertices over a clique, vertex i linked to the first n_i clique vertices.

    n_i is greatest with binom(n_i, k-1) <= m_{i-1}; the links use up ``budget``
    k-cliques exactly.
    """
    records: list[ExtraVertexRecord] = []
    rest = budget
    while rest > 0:
        n_i = greatest_binom_top(rest, k - 1)
        rest -= binom(n_i, k - 1)
        records.append(ExtraVertexRecord(index=len(records) + 1, n=n_i, q=None, p=-1, m=rest, color=color))
    return records


def _check_two_face_args(k: int, p: int, m: int, q: int) -> None:
    if not (k > p >= 1):
        raise input_error("Need k > p >= 1.", k=k, p=p)
    if m < 1 or q < 1:
        raise input_error("Need m >= 1 and q >= 1.", m=m, q=q)


def construct_two_face(
    k: int, p: int, m: int, q: int, *, threads: int | None = None
) -> ConstructionResult:
    """Flag complex with f_{k-1} = m and f_{p-1} = q, or the overshoot."""
    _check_two_face_args(k, p, m, q)
    n0 = greatest_binom_top(m, k)
    m0 = m - binom(n0, k)
    g = VertexColoredGraph()
    for v in range(n0):
        g.add_vertex(v + 1, range(v))
    extra_color = n0

    records = two_face_extra_vertices(k, m0, extra_color)
    for record in records:
        g.add_vertex(extra_color, range(record.n))

    used = binom(n0, p) + sum(binom(r.n, p - 1) for r in records)
    plan = ConstructionPlan(kind="two_face", target=(m, q), params={"k": k, "p": p, "m": m, "q": q})
    stage = StageRecord(
        stage=k, colors=n0, card=k, target=m, parts=(1,) * n0, n0=n0, m0=m0, extras=records,
        new_vertices=n0 + len(records),
    )
    plan.stages.append(stage)
    if used > q:
        plan.failure = ConstructionFailure(
            reason="overshoot",
            deficit=used - q,
            stage=k,
            dimension=p - 1,
            used=used,
            allowed=q,
            message=f"f_{p - 1} overshoot {used - q}",
        )
        LOG.info("two-face construction for (k=%d, p=%d, m=%d, q=%d) overshoots by %d", k, p, m, q, used - q)
        return ConstructionResult(plan=plan)

    pendants = q - used
    for _ in range(pendants):
        g.add_vertex(extra_color, range(p - 1))
    stage.pendants = pendants
    _check_counts(g, "two_face", {k: m, p: q}, threads=threads)
    plan.f_vector = tuple(clique_counts(g, k, threads=threads))
    return ConstructionResult(plan=plan, graph=g)


# --- bounded dimension ----------------------------------------------------


def construct_dim(
    r: int, k: int, p: int, m: int, q: int, *, pair: bool = False, threads: int | None = None
) -> ConstructionResult:
    """Flag complex of dimension <= r-1 with f_{k-1} = m and f_{p-1} = q, or the overshoot."""
    _check_two_face_args(k, p, m, q)
    if r < k:
        raise input_error("Need r >= k.", r=r, k=k)
    n0 = greatest_turan_top(m, k, r)
    parts = turan_parts(n0, r)
    g = build_multipartite(parts)
    base = _part_blocks(parts)

    m0 = m - turan_count(n0, k, r)
    plan = ConstructionPlan(
        kind="dim", target=(m, q), params={"r": r, "k": k, "p": p, "m": m, "q": q, "pair": pair}
    )
    try:
        extras = _grow_stage(base, k, m0, pairing=pair)
    except _LinkCapacity as exc:
        plan.failure = ConstructionFailure(
            reason="link_capacity", deficit=max(exc.n - exc.capacity, 0), stage=r, dimension=k - 1,
            message=f"extra vertex {exc.index} needs a link on {exc.n} vertices",
        )
        return ConstructionResult(plan=plan)
    stage = StageRecord(
        stage=r, colors=r, card=k, target=m, parts=parts, n0=n0, m0=m0,
        extras=[e.record for e in extras], new_vertices=n0 + len(extras),
    )
    plan.stages.append(stage)

    used = turan_count(n0, p, r) + _extras_faces(extras, p, r)
    if used > q:
        plan.failure = ConstructionFailure(
            reason="overshoot",
            deficit=used - q,
            stage=r,
            dimension=p - 1,
            used=used,
            allowed=q,
            message=f"f_{p - 1} overshoot {used - q}",
        )
        return ConstructionResult(plan=plan)

    _attach_extras(g, extras, list(range(1, r + 1)))
    pendants = q - used
    anchors = [block[0] for block in base[: p - 1]]
    for _ in range(pendants):
        g.add_vertex(p, anchors)
    stage.pendants = pendants
    _check_counts(g, "dim", {k: m, p: q}, threads=threads)
    plan.f_vector = tuple(clique_counts(g, k, threads=threads))
    return ConstructionResult(plan=plan, graph=g)


def pair_extra_vertices(
    base_parts: Sequence[int], card: int, budget: int
) -> list[ExtraVertexRecord]:
    """The (n_i, q_i, p_i, m_i) sequence for a stage over a complete multipartite base.

    Runs the stage builder with pairing on, so every consecutive pair that the
    floor inequality (or the link solver in the middle zone) allows is joined.
    """
    return stage_extra_vertices(base_parts, card, budget, pairing=True)


def stage_extra_vertices(
    base_parts: Sequence[int], card: int, budget: int, *, pairing: bool = False
) -> list[ExtraVertexRecord]:
    """Extra-vertex records for ``budget`` card-cliques over a complete multipartite base."""
    base = _part_blocks(base_parts)
    try:
        extras = _grow_stage(base, card, budget, pairing=pairing)
    except _LinkCapacity as exc:
        raise input_error(
            "The base parts cannot hold an extra vertex's link.",
            base_parts=list(base_parts), index=exc.index, n=exc.n, capacity=exc.capacity,
        ) from exc
    return [extra.record for extra in extras]


# --- the staged construction ---------------------------------------------


def _failure_diagnosis(target: FaceVector) -> list[str]:
    return [
        f"{item['bound']} needs f_{item['f_index']} >= {item['need']}, target has {item['have']}"
        for item in diagnose_face_vector(target)
    ]


def _profile(parts: Sequence[int], extras: Sequence[_Extra], colors: int, length: int) -> list[int]:
    base = multipartite_profile(parts, length - 1)
    return [base[c] + _extras_faces(extras, c, colors) for c in range(length)]


def construct_main(
    target: FaceVector,
    alloc: Allocation | None = None,
    *,
    pair: bool = True,
    threads: int | None = None,
) -> ConstructionResult:
    """Flag complex with face vector ``target`` built stage by stage, or the stage that ran out.

    Stage j builds a j-colored complex (a complete j-partite base plus extra
    vertices) and glues it to the previous stages along the first j parts of
    the previous base, so that the j-faces come out exactly right.
    """
    d = target.d
    if any(x < 1 for x in target.entries):
        raise input_error("construct_main needs every face number to be positive.", target=target.to_list())
    alloc = alloc or Allocation.balanced()
    plan = ConstructionPlan(
        kind="main",
        target=tuple(target.entries),
        params={"d": d, "pair": pair, "allocation": alloc.to_dict()},
        notes=list(alloc.notes),
    )
    g = VertexColoredGraph()
    if d == 0:
        plan.f_vector = (1,)
        return ConstructionResult(plan=plan, graph=g)

    ledger = [1] + [0] * d
    prev_base: list[list[int]] | None = None
    for j in range(d, 0, -1):
        if prev_base is not None and ledger[j] > target[j]:
            deficit = ledger[j] - target[j]
            plan.failure = ConstructionFailure(
                reason="budget_exceeded",
                deficit=deficit,
                stage=j + 1,
                dimension=j - 1,
                used=ledger[j],
                allowed=target[j],
                message=f"f_{j - 1} deficit {deficit} at stage {j + 1}",
                diagnosis=_failure_diagnosis(target),
            )
            LOG.info("construction of %s failed: %s", target.to_list(), plan.failure.message)
            return ConstructionResult(plan=plan)

        glue_parts: tuple[int, ...] = ()
        if prev_base is not None:
            glue_parts = tuple(len(block) for block in prev_base[:j])
        glue_top = multipartite_count(glue_parts, j)
        stage_target = target[j] - ledger[j] + glue_top

        pinned = alloc.parts.get(j)
        if pinned is not None:
            parts = tuple(pinned)
            if len(parts) != j:
                raise input_error("Pinned parts need one size per color.", stage=j, parts=list(parts))
            mode = "pinned"
        else:
            parts = turan_parts(greatest_turan_top(stage_target, j, j), j)
            mode = "balanced"
        LOG.info("stage %d: target %d, parts %s (%s)", j, stage_target, list(parts), mode)

        if glue_parts and any(a < b for a, b in zip(parts, glue_parts)):
            plan.failure = ConstructionFailure(
                reason="glue_mismatch",
                deficit=max(b - a for a, b in zip(parts, glue_parts)),
                stage=j,
                dimension=0,
                message=f"stage {j} parts {list(parts)} cannot hold the glue {list(glue_parts)}",
                diagnosis=_failure_diagnosis(target),
            )
            return ConstructionResult(plan=plan)
        top = multipartite_count(parts, j)
        if top > stage_target:
            plan.failure = ConstructionFailure(
                reason="base_overshoot",
                deficit=top - stage_target,
                stage=j,
                dimension=j - 1,
                used=top,
                allowed=stage_target,
                message=f"stage {j} base already has {top} faces of dimension {j - 1}, allowed {stage_target}",
                diagnosis=_failure_diagnosis(target),
            )
            return ConstructionResult(plan=plan)

        # Base: glue vertices first (shared with the previous base), then fresh ones.
        base: list[list[int]] = []
        for c in range(j):
            block = list(prev_base[c][: glue_parts[c]]) if prev_base is not None else []
            base.append(block)
        for c, size in enumerate(parts):
            while len(base[c]) < size:
                others = [v for x, block in enumerate(base) if x != c for v in block]
                base[c].append(g.add_vertex(c + 1, others))

        m0 = stage_target - top
        if j == 1 and m0 > 0:
            plan.failure = ConstructionFailure(
                reason="base_shortfall",
                deficit=m0,
                stage=1,
                dimension=0,
                used=top,
                allowed=stage_target,
                message=f"stage 1 parts {list(parts)} leave {m0} vertices unplaced",
                diagnosis=_failure_diagnosis(target),
            )
            return ConstructionResult(plan=plan)
        try:
            extras = _grow_stage(base, j, m0, pairing=pair) if j >= 2 else []
        except _LinkCapacity as exc:
            plan.failure = ConstructionFailure(
                reason="link_capacity",
                deficit=max(exc.n - exc.capacity, 0),
                stage=j,
                dimension=j - 1,
                message=f"stage {j} extra vertex {exc.index} needs a link on {exc.n} vertices",
                diagnosis=_failure_diagnosis(target),
            )
            return ConstructionResult(plan=plan)
        _attach_extras(g, extras, list(range(1, j + 1)))

        gamma = _profile(parts, extras, j, d + 1)
        glue_profile = multipartite_profile(glue_parts, d)
        if prev_base is None:
            ledger = gamma
        else:
            ledger = [ledger[c] + gamma[c] - glue_profile[c] for c in range(d + 1)]
        plan.stages.append(
            StageRecord(
                stage=j,
                colors=j,
                card=j,
                target=stage_target,
                parts=parts,
                n0=sum(parts),
                m0=m0,
                extras=[e.record for e in extras],
                glue_parts=glue_parts if prev_base is not None else None,
                glue_edges=multipartite_count(glue_parts, 2),
                new_vertices=sum(parts) - sum(glue_parts) + len(extras),
                allocation=mode,
                f_vector=tuple(ledger),
            )
        )
        prev_base = base

    counts = clique_counts(g, d + 1, threads=threads)
    for card in range(d + 2):
        want = target[card] if card <= d else 0
        if counts[card] != want:
            raise _self_verification_error("main", card, counts[card], want)
    plan.f_vector = tuple(counts[: d + 1])
    return ConstructionResult(plan=plan, graph=g)


def construct_hvec(
    target_h: HVector, alloc: Allocation | None = None, *, threads: int | None = None
) -> ConstructionResult:
    """Balanced flag complex Δ⁺ with h-vector ``target_h``, from Δ with f(Δ) = (1, h_1, ..., h_d)."""
    if any(x < 0 for x in target_h.entries):
        raise input_error("h-vector targets must be nonnegative.", h=target_h.to_list())
    d = target_h.d
    entries = list(target_h.entries)
    while len(entries) > 1 and entries[-1] == 0:
        entries.pop()
    inner = construct_main(FaceVector(tuple(entries)), alloc, threads=threads)
    plan = inner.plan
    plan.kind = "hvec"
    plan.target = tuple(target_h.entries)
    if not inner.succeeded or inner.graph is None:
        return ConstructionResult(plan=plan)

    plus = plus_construction(inner.graph, range(1, d + 1))
    counts = clique_counts(plus, d + 1, threads=threads)
    if counts[d + 1]:
        raise _self_verification_error("hvec", d + 1, counts[d + 1], 0)
    got = f_to_h_entries(counts[: d + 1], d)
    for i, (have, want) in enumerate(zip(got, target_h.entries)):
        if have != want:
            raise _self_verification_error("hvec", i, have, want)
    plan.params["inner_f_vector"] = list(inner.plan.f_vector or ())
    plan.f_vector = tuple(counts[: d + 1])
    plan.notes.append(f"plus construction added {d} vertices, one per color")
    return ConstructionResult(plan=plan, graph=plus)
