from __future__ import annotations

import json
from pathlib import Path

import pytest

from flagforge.config import reset_runtime_config_for_tests
from flagforge.construct import construct_main
from flagforge.complex import VertexColoredGraph
from flagforge.errors import FlagForgeError
from flagforge.models import FaceVector
from flagforge.serialization import (
    FORMAT_VERSION,
    check_format_version,
    dump_graph,
    dump_plan,
    graph_from_edgelist,
    load_graph,
    load_plan,
    plan_to_document,
    read_graph_file,
    report_document,
)


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


def test_graph_json_and_edgelist_agree() -> None:
    g = VertexColoredGraph([1, 2, 1], [(0, 1), (1, 2)])
    assert json.loads(dump_graph(g)) == {"colors": [1, 2, 1], "edges": [[0, 1], [1, 2]]}
    assert dump_graph(g, "edgelist") == "#colors 1 2 1\n0 1\n1 2\n"
    assert load_graph(dump_graph(g)) == g
    assert load_graph(dump_graph(g, "edgelist")) == g


def test_edgelist_needs_colors_header() -> None:
    with pytest.raises(FlagForgeError) as exc:
        graph_from_edgelist("0 1\n")
    assert exc.value.error_code == "FLAG_002"


@pytest.mark.parametrize(
    "text",
    [
        '{"colors": [1, 2], "edges": [[0, 0]]}',
        '{"colors": [1, 2], "edges": [[0, 7]]}',
        '{"colors": [0, 2], "edges": []}',
        '{"colors": [1, 2]}',
        "{not json",
        "#colors 1 2\n0 1 2\n",
    ],
)
def test_bad_graph_documents_are_format_errors(text: str) -> None:
    with pytest.raises(FlagForgeError) as exc:
        load_graph(text)
    assert exc.value.error_code == "FLAG_002"


def test_read_graph_file_missing(tmp_path: Path) -> None:
    with pytest.raises(FlagForgeError) as exc:
        read_graph_file(tmp_path / "absent.json")
    assert exc.value.error_code == "FLAG_002"


def test_plan_document_survives_a_reload() -> None:
    plan = construct_main(FaceVector((1, 100, 1000, 2000)), threads=1).plan
    doc = json.loads(dump_plan(plan))
    assert doc["format_version"] == FORMAT_VERSION
    assert doc["outcome"] == "success"
    assert load_plan(dump_plan(plan)).to_dict() == plan.to_dict()


def test_failed_plan_keeps_its_failure() -> None:
    plan = construct_main(FaceVector((1, 62, 1161, 5832)), threads=1).plan
    reloaded = load_plan(dump_plan(plan))
    assert reloaded.failure is not None
    assert reloaded.failure.reason == "budget_exceeded"


@pytest.mark.parametrize("version", ["2.0", "1.5", "banana"])
def test_incompatible_plan_versions(version: str) -> None:
    plan = construct_main(FaceVector((1, 3, 3, 1)), threads=1).plan
    doc = plan_to_document(plan)
    doc["format_version"] = version
    with pytest.raises(FlagForgeError) as exc:
        load_plan(json.dumps(doc))
    assert exc.value.error_code == "FLAG_003"


def test_plan_missing_keys_is_a_compatibility_error() -> None:
    with pytest.raises(FlagForgeError) as exc:
        load_plan('{"format_version": "1.0", "kind": "main"}')
    assert exc.value.error_code == "FLAG_003"


def test_check_format_version_accepts_older_minor() -> None:
    assert str(check_format_version("1.0")) == "1.0"
    assert str(check_format_version("1")) == "1"


def test_report_document_is_stamped() -> None:
    doc = report_document("bound", {"value": 3})
    assert doc["report"] == "bound"
    assert doc["format_version"] == FORMAT_VERSION
    assert "flagforge_version" in doc
