from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, ClassVar

from flagforge.errors import input_error


def _parse_int_vector(text: str, *, name: str) -> tuple[int, ...]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    try:
        return tuple(int(item) for item in items)
    except ValueError:
        raise input_error(f"{name} must be a comma-separated list of integers.", value=text) from None


@dataclass(frozen=True)
class FaceVector:
    """(f_{-1}=1, f_0, ..., f_{d-1}); index j counts faces on j vertices."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or entries[0] != 1:
            raise input_error("A face vector must start with f_{-1} = 1.", entries=list(entries))
        if any(x < 0 for x in entries):
            raise input_error("Face numbers must be nonnegative.", entries=list(entries))
        if len(entries) > 1 and entries[-1] == 0:
            raise input_error("The last face number must be positive.", entries=list(entries))

    @classmethod
    def parse(cls, text: str) -> FaceVector:
        return cls(_parse_int_vector(text, name="face vector"))

    @property
    def d(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, index: int) -> int:
        return self.entries[index]

    def __len__(self) -> int:
        return len(self.entries)

    def to_list(self) -> list[int]:
        return list(self.entries)


@dataclass(frozen=True)
class HVector:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(x) for x in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or entries[0] != 1:
            raise input_error("An h-vector must start with h_0 = 1.", entries=list(entries))

    @classmethod
    def parse(cls, text: str) -> HVector:
        return cls(_parse_int_vector(text, name="h-vector"))

    @property
    def d(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, index: int) -> int:
        return self.entries[index]

    def __len__(self) -> int:
        return len(self.entries)

    def to_list(self) -> list[int]:
        return list(self.entries)


@dataclass(frozen=True)
class CascadeRep:
    """Greedy sum of binomial (plain) or Turán (colored) coefficients."""

    terms: tuple[tuple[int, int], ...]
    value: int
    flavor: str = "plain"
    r: int | None = None

    @property
    def tops(self) -> tuple[int, ...]:
        return tuple(top for top, _ in self.terms)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "cascade",
            "flavor": self.flavor,
            "r": self.r,
            "value": self.value,
            "terms": [list(term) for term in self.terms],
        }


@dataclass(frozen=True)
class TwoTermRep:
    a: int
    b: int
    m: int
    k: int
    flavor: str = "plain"
    r: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "two_term",
            "flavor": self.flavor,
            "r": self.r,
            "k": self.k,
            "a": self.a,
            "b": self.b,
            "m": self.m,
        }


@dataclass(frozen=True)
class FlagRep:
    n_k: int
    n_k1: int | None
    a_terms: tuple[tuple[int, int], ...]
    k: int
    value: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "flag",
            "k": self.k,
            "value": self.value,
            "n_k": self.n_k,
            "n_k1": self.n_k1,
            "a_terms": [list(term) for term in self.a_terms],
        }


@dataclass(frozen=True)
class BoundReport:
    kind: str
    value: Any
    branch_taken: str | None = None
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        value = self.value
        if not isinstance(value, int):
            value = str(value)
        return {"kind": self.kind, "value": value, "branch_taken": self.branch_taken, "details": self.details}


@dataclass
class ExtraVertexRecord:
    index: int
    n: int
    q: int | None
    p: int
    m: int
    color: int
    pairing: str = "none"

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "n": self.n,
            "q": self.q,
            "p": self.p,
            "m": self.m,
            "color": self.color,
            "pairing": self.pairing,
        }


@dataclass
class StageRecord:
    stage: int
    colors: int
    card: int
    target: int
    parts: tuple[int, ...]
    n0: int
    m0: int
    extras: list[ExtraVertexRecord] = field(default_factory=list)
    glue_parts: tuple[int, ...] | None = None
    glue_edges: int = 0
    new_vertices: int = 0
    pendants: int = 0
    allocation: str = "balanced"
    f_vector: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "stage": self.stage,
            "colors": self.colors,
            "card": self.card,
            "target": self.target,
            "allocation": self.allocation,
            "parts": list(self.parts),
            "n0": self.n0,
            "m0": self.m0,
            "extras": [extra.to_dict() for extra in self.extras],
            "glue_parts": None if self.glue_parts is None else list(self.glue_parts),
            "glue_edges": self.glue_edges,
            "new_vertices": self.new_vertices,
            "pendants": self.pendants,
            "f_vector": list(self.f_vector),
        }


@dataclass
class ConstructionFailure:
    reason: str
    deficit: int
    stage: int | None = None
    dimension: int | None = None
    used: int | None = None
    allowed: int | None = None
    message: str = ""
    diagnosis: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "reason": self.reason,
            "deficit": self.deficit,
            "stage": self.stage,
            "dimension": self.dimension,
            "used": self.used,
            "allowed": self.allowed,
            "message": self.message,
            "diagnosis": list(self.diagnosis),
        }


@dataclass
class ConstructionPlan:
    kind: str
    target: tuple[int, ...]
    params: dict[str, Any] = field(default_factory=dict)
    stages: list[StageRecord] = field(default_factory=list)
    failure: ConstructionFailure | None = None
    f_vector: tuple[int, ...] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.failure is None

    def stage(self, j: int) -> StageRecord:
        for record in self.stages:
            if record.stage == j:
                return record
        raise KeyError(j)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "target": list(self.target),
            "params": dict(self.params),
            "outcome": "success" if self.succeeded else "failure",
            "stages": [record.to_dict() for record in self.stages],
            "failure": None if self.failure is None else self.failure.to_dict(),
            "f_vector": None if self.f_vector is None else list(self.f_vector),
            "notes": list(self.notes),
        }


@dataclass
class Allocation:
    """Real part-size targets a[j][k] per stage plus the integer parts pinned for some stages.

    ``rows[j]`` holds a_1^j..a_j^j. Stages missing from ``parts`` fall back to the
    balanced Turán greedy.
    """

    rows: dict[int, tuple[Fraction, ...]] = field(default_factory=dict)
    parts: dict[int, tuple[int, ...]] = field(default_factory=dict)
    mode: str = "auto"
    repaired_levels: tuple[int, ...] = ()
    monotone: bool = True
    notes: list[str] = field(default_factory=list)

    @classmethod
    def balanced(cls) -> Allocation:
        return cls(mode="balanced")

    @classmethod
    def explicit(cls, parts: tuple[int, ...]) -> Allocation:
        return cls(parts={len(parts): tuple(parts)}, mode="explicit")

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "rows": {str(j): [str(x) for x in row] for j, row in sorted(self.rows.items())},
            "parts": {str(j): list(row) for j, row in sorted(self.parts.items())},
            "repaired_levels": list(self.repaired_levels),
            "monotone": self.monotone,
            "notes": list(self.notes),
        }


@dataclass
class SearchReport:
    fix_card: int
    fix_count: int
    report_card: int
    max_vertices: int
    attained: dict[int, list[tuple[int, int]]] = field(default_factory=dict)
    excluded_in_domain: list[int] = field(default_factory=list)
    graphs_examined: int = 0
    witness_vertices: dict[int, int] = field(default_factory=dict)

    @property
    def constraint(self) -> str:
        return f"f_{self.fix_card - 1} = {self.fix_count}; report f_{self.report_card - 1}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "constraint": self.constraint,
            "fix_card": self.fix_card,
            "fix_count": self.fix_count,
            "report_card": self.report_card,
            "domain": {"max_vertices": self.max_vertices},
            "attained": sorted(self.attained),
            "excluded_in_domain": list(self.excluded_in_domain),
            "witnesses": {
                str(value): {"vertices": self.witness_vertices.get(value, 0), "edges": [list(e) for e in edges]}
                for value, edges in sorted(self.attained.items())
            },
            "graphs_examined": self.graphs_examined,
        }


@dataclass
class RunConfig:
    command: str
    out: str | None = None
    verbosity: int = 0
    threads: int = 1
    precision: int = 50
    graph_format: str = "json"


@dataclass(frozen=True)
class VerifyOutcome:
    """Entrywise comparison of a recomputed face vector against an expected one."""

    passed: bool
    f_vector: tuple[int, ...]
    expected: tuple[int, ...]
    index: int | None = None
    got: int | None = None
    want: int | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "outcome": "pass" if self.passed else "mismatch",
            "f_vector": list(self.f_vector),
            "expected": list(self.expected),
        }
        if not self.passed:
            out["mismatch"] = {"index": self.index, "got": self.got, "want": self.want}
        return out


@dataclass(frozen=True)
class SuiteRanges:
    """Sweep limits for the consistency suite; the defaults finish in seconds."""

    turan_n: int = 24
    turan_r: int = 5
    turan_k: int = 5
    brute_force_n: int = 12
    cascade_m: int = 250
    cascade_k: int = 4
    cascade_r: int = 5
    c_cost_m: int = 3000
    c_cost_k: int = 6
    d_cost_m: int = 1000
    d_cost_r: int = 6
    threshold_m: int = 40
    threshold_k: int = 4
    threshold_r: int = 5
    dim_threshold_m: int = 20
    tail_m: int = 200
    tail_k: int = 4
    tail_r: int = 5
    tail_graph_m: int = 25

    @classmethod
    def full(cls) -> SuiteRanges:
        return cls(
            turan_n=60,
            turan_r=6,
            turan_k=6,
            brute_force_n=60,
            cascade_m=2000,
            cascade_k=5,
            cascade_r=6,
            c_cost_m=100_000,
            c_cost_k=7,
            d_cost_m=10_000,
            d_cost_r=8,
            threshold_m=5000,
            threshold_k=6,
            threshold_r=6,
            dim_threshold_m=500,
            tail_m=10_000,
            tail_k=5,
            tail_r=6,
            tail_graph_m=300,
        )

    def to_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass
class SuiteCheck:
    name: str
    cases: int = 0
    failed: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)

    MAX_RECORDED: ClassVar[int] = 20

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, **case: Any) -> None:
        """Count one case; keep the first few failing ones for the ledger."""
        self.cases += 1
        if ok:
            return
        self.failed += 1
        if len(self.failures) < self.MAX_RECORDED:
            self.failures.append(case)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failed": self.failed,
            "failures": list(self.failures),
        }


@dataclass
class SuiteReport:
    ranges: SuiteRanges
    checks: list[SuiteCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> SuiteCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "ranges": self.ranges.to_dict(),
            "checks": [check.to_dict() for check in self.checks],
        }
