"""Graph, plan and report documents.

Graphs are JSON ``{"colors": [...], "edges": [[u, v], ...]}`` or a text edge
list with a ``#colors c0 c1 ...`` header. Plans and reports are JSON objects
stamped with ``format_version`` and the producing ``flagforge_version``.
"""

from __future__ import annotations

import json
from importlib.metadata import PackageNotFoundError, version as package_version
from pathlib import Path
from typing import Any

import jsonschema
from packaging.version import InvalidVersion, Version

from flagforge.complex import VertexColoredGraph
from flagforge.errors import FlagForgeError, make_error
from flagforge.models import (
    ConstructionFailure,
    ConstructionPlan,
    ExtraVertexRecord,
    StageRecord,
)

FORMAT_VERSION = "1.0"

GRAPH_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["colors", "edges"],
    "properties": {
        "colors": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {"type": "integer", "minimum": 0},
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
}

_EXTRA_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["index", "n", "q", "p", "m", "color", "pairing"],
}

PLAN_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["format_version", "kind", "target", "params", "outcome", "stages", "failure", "f_vector", "notes"],
    "properties": {
        "format_version": {"type": "string"},
        "flagforge_version": {"type": "string"},
        "kind": {"type": "string"},
        "target": {"type": "array", "items": {"type": "integer"}},
        "params": {"type": "object"},
        "outcome": {"enum": ["success", "failure"]},
        "stages": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stage", "colors", "card", "target", "parts", "n0", "m0", "extras"],
                "properties": {"extras": {"type": "array", "items": _EXTRA_SCHEMA}},
            },
        },
        "failure": {"type": ["object", "null"]},
        "f_vector": {"type": ["array", "null"], "items": {"type": "integer"}},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["format_version", "report"],
    "properties": {"format_version": {"type": "string"}, "report": {"type": "string"}},
}


def flagforge_version() -> str:
    try:
        return package_version("flagforge")
    except PackageNotFoundError:
        return "0.1.0"


def _graph_format_error(message: str, **details: Any) -> FlagForgeError:
    return make_error(
        error_code="FLAG_002",
        message=message,
        details=details,
        expected_schema=GRAPH_SCHEMA,
    )


def _compat_error(message: str, **details: Any) -> FlagForgeError:
    return make_error(
        error_code="FLAG_003",
        message=message,
        details=details,
        recovery_hint=f"Regenerate the document with this flagforge (format {FORMAT_VERSION}).",
    )


def validate_document(instance: Any, schema: dict[str, Any], *, what: str) -> None:
    try:
        jsonschema.validate(instance=instance, schema=schema)
    except jsonschema.ValidationError as exc:
        details = {
            "validator": exc.validator,
            "path": list(exc.absolute_path),
            "schema_path": list(exc.absolute_schema_path),
            "reason": exc.message,
        }
        if what == "graph":
            raise _graph_format_error("Graph document does not match the schema.", **details) from None
        raise _compat_error(f"{what} document does not match the schema.", **details) from None


def check_format_version(raw: Any) -> Version:
    try:
        found = Version(str(raw))
    except InvalidVersion:
        raise _compat_error("format_version is not a version string.", format_version=raw) from None
    supported = Version(FORMAT_VERSION)
    if found.major != supported.major or found > supported:
        raise _compat_error(
            "Unsupported document format version.",
            format_version=str(found),
            supported=FORMAT_VERSION,
        )
    return found


def graph_to_dict(g: VertexColoredGraph) -> dict[str, Any]:
    return {"colors": list(g.colors), "edges": [list(edge) for edge in g.edges()]}


def graph_from_dict(obj: Any) -> VertexColoredGraph:
    validate_document(obj, GRAPH_SCHEMA, what="graph")
    try:
        return VertexColoredGraph(obj["colors"], obj["edges"])
    except FlagForgeError as exc:
        raise _graph_format_error(exc.payload.message, **exc.payload.details) from None


def graph_to_edgelist(g: VertexColoredGraph) -> str:
    lines = ["#colors " + " ".join(str(c) for c in g.colors)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def graph_from_edgelist(text: str) -> VertexColoredGraph:
    colors: list[int] | None = None
    edges: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            head, _, rest = line[1:].partition(" ")
            if head == "colors":
                try:
                    colors = [int(tok) for tok in rest.split()]
                except ValueError:
                    raise _graph_format_error("Bad #colors header.", line=lineno) from None
            continue
        parts = line.split()
        if len(parts) != 2:
            raise _graph_format_error("Edge lines need exactly two vertex ids.", line=lineno, text=raw)
        try:
            edges.append([int(parts[0]), int(parts[1])])
        except ValueError:
            raise _graph_format_error("Vertex ids must be integers.", line=lineno, text=raw) from None
    if colors is None:
        raise _graph_format_error("Edge list is missing its #colors header.")
    return graph_from_dict({"colors": colors, "edges": edges})


def dump_graph(g: VertexColoredGraph, graph_format: str = "json") -> str:
    if graph_format == "edgelist":
        return graph_to_edgelist(g)
    return json.dumps(graph_to_dict(g), sort_keys=True) + "\n"


def load_graph(text: str) -> VertexColoredGraph:
    """Parse either graph format; JSON is recognised by its leading brace."""
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _graph_format_error("Graph file is not valid JSON.", json_error=str(exc)) from None
        return graph_from_dict(obj)
    return graph_from_edgelist(text)


def read_graph_file(path: str | Path) -> VertexColoredGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _graph_format_error("Could not read graph file.", path=str(path), reason=str(exc)) from None
    return load_graph(text)


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def plan_to_document(plan: ConstructionPlan) -> dict[str, Any]:
    doc = plan.to_dict()
    doc["format_version"] = FORMAT_VERSION
    doc["flagforge_version"] = flagforge_version()
    return doc


def dump_plan(plan: ConstructionPlan) -> str:
    return json.dumps(plan_to_document(plan), sort_keys=True, indent=2) + "\n"


def _stage_from_dict(obj: dict[str, Any]) -> StageRecord:
    glue = obj.get("glue_parts")
    return StageRecord(
        stage=obj["stage"],
        colors=obj["colors"],
        card=obj["card"],
        target=obj["target"],
        parts=tuple(obj["parts"]),
        n0=obj["n0"],
        m0=obj["m0"],
        extras=[ExtraVertexRecord(**extra) for extra in obj["extras"]],
        glue_parts=None if glue is None else tuple(glue),
        glue_edges=obj.get("glue_edges", 0),
        new_vertices=obj.get("new_vertices", 0),
        pendants=obj.get("pendants", 0),
        allocation=obj.get("allocation", "balanced"),
        f_vector=tuple(obj.get("f_vector", ())),
    )


def plan_from_document(doc: Any) -> ConstructionPlan:
    if isinstance(doc, dict) and "format_version" in doc:
        check_format_version(doc["format_version"])
    validate_document(doc, PLAN_SCHEMA, what="plan")
    failure = doc["failure"]
    return ConstructionPlan(
        kind=doc["kind"],
        target=tuple(doc["target"]),
        params=dict(doc["params"]),
        stages=[_stage_from_dict(stage) for stage in doc["stages"]],
        failure=None if failure is None else ConstructionFailure(**failure),
        f_vector=None if doc["f_vector"] is None else tuple(doc["f_vector"]),
        notes=list(doc["notes"]),
    )


def load_plan(text: str) -> ConstructionPlan:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _compat_error("Plan file is not valid JSON.", json_error=str(exc)) from None
    return plan_from_document(doc)


def report_document(report: str, payload: dict[str, Any]) -> dict[str, Any]:
    doc = {"format_version": FORMAT_VERSION, "flagforge_version": flagforge_version(), "report": report}
    doc.update(payload)
    validate_document(doc, REPORT_SCHEMA, what="report")
    return doc
