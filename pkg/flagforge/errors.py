from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any

# code -> (error_type, default recovery hint)
ERROR_CATALOG: dict[str, tuple[str, str]] = {
    "FLAG_001": ("InputValidationError", "Check the argument ranges listed in docs/cli.md."),
    "FLAG_002": ("GraphFormatError", "See docs/formats.md for the graph JSON and edge-list layouts."),
    "FLAG_003": ("PlanCompatibilityError", "Regenerate the plan with this version of flagforge."),
    "FLAG_004": ("SizeGuardError", "Shrink the input below the stated vertex limit."),
    "FLAG_005": ("ColoringError", "Recolor the graph so no edge joins two vertices of one color."),
    "FLAG_006": ("UndefinedRepresentationError", "Use the plain cascade when k < 3."),
    "FLAG_007": ("ConfigError", "Fix the value named in details.key; see docs/configuration.md."),
    "FLAG_900": ("SelfVerificationError", "This is a bug. Keep the plan (--plan-out) that reproduces it."),
    "FLAG_999": ("UnknownUnhandledError", "Re-run with -vv for debug logs and check the inputs against docs/cli.md."),
}

EXIT_USAGE = 1
EXIT_INTERNAL = 3


@dataclass(frozen=True)
class ErrorPayload:
    error_code: str
    error_type: str
    message: str
    details: dict[str, Any] = field(default_factory=dict)
    expected_schema: dict[str, Any] | None = None
    received_payload: Any | None = None
    recovery_hint: str | None = None
    doc_ref: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class FlagForgeError(Exception):
    """Raised for every user-facing failure; carries a JSON-ready payload."""

    def __init__(self, payload: ErrorPayload) -> None:
        super().__init__(payload.message)
        self.payload = payload

    @property
    def error_code(self) -> str:
        return self.payload.error_code

    @property
    def exit_code(self) -> int:
        return EXIT_INTERNAL if self.error_code == "FLAG_900" else EXIT_USAGE


def make_error(
    *,
    error_code: str,
    message: str,
    error_type: str | None = None,
    details: dict[str, Any] | None = None,
    expected_schema: dict[str, Any] | None = None,
    received_payload: Any | None = None,
    recovery_hint: str | None = None,
    doc_ref: str | None = None,
) -> FlagForgeError:
    catalog_type, catalog_hint = ERROR_CATALOG[error_code]
    return FlagForgeError(
        ErrorPayload(
            error_code=error_code,
            error_type=error_type or catalog_type,
            message=message,
            details=details or {},
            expected_schema=expected_schema,
            received_payload=received_payload,
            recovery_hint=recovery_hint or catalog_hint,
            doc_ref=doc_ref or f"docs/errors.md#{error_code}",
        )
    )


def input_error(message: str, *, recovery_hint: str | None = None, **details: Any) -> FlagForgeError:
    """FLAG_001 shortcut for argument precondition failures."""
    return make_error(error_code="FLAG_001", message=message, details=details, recovery_hint=recovery_hint)


def unhandled_error(exc: BaseException) -> FlagForgeError:
    return make_error(
        error_code="FLAG_999",
        error_type=type(exc).__name__,
        message=str(exc),
    )
