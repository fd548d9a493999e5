from __future__ import annotations

from pathlib import Path

import pytest

from flagforge.config import reset_runtime_config_for_tests
from flagforge.errors import ERROR_CATALOG, input_error, make_error, unhandled_error

ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(autouse=True)
def _reset_config_cache() -> None:
    reset_runtime_config_for_tests()


def test_every_code_is_documented() -> None:
    text = (ROOT / "docs" / "errors.md").read_text(encoding="utf-8")
    for code, (error_type, _) in ERROR_CATALOG.items():
        assert f'<a id="{code}"></a>' in text
        assert f"`{code}` {error_type}" in text


def test_make_error_fills_type_hint_and_anchor() -> None:
    exc = make_error(error_code="FLAG_004", message="too big", details={"vertices": 30})
    payload = exc.payload.to_dict()
    assert payload["error_type"] == "SizeGuardError"
    assert payload["doc_ref"] == "docs/errors.md#FLAG_004"
    assert payload["recovery_hint"]
    assert payload["details"] == {"vertices": 30}
    assert exc.exit_code == 1


def test_self_verification_errors_exit_with_three() -> None:
    assert make_error(error_code="FLAG_900", message="ledger mismatch").exit_code == 3


def test_input_error_collects_details() -> None:
    exc = input_error("m must be >= 1.", m=0)
    assert exc.error_code == "FLAG_001"
    assert exc.payload.details == {"m": 0}
    assert str(exc) == "m must be >= 1."


def test_unhandled_error_keeps_the_exception_type() -> None:
    exc = unhandled_error(ZeroDivisionError("division by zero"))
    assert exc.error_code == "FLAG_999"
    assert exc.payload.error_type == "ZeroDivisionError"
