"""Exact matrix algebra, worksheet generation and a certainty-factor expert-system shell."""

from ._core import (
    Api,
    EngineError,
    KbError,
    MatError,
    Session,
    WorksheetError,
    canonical_kb,
    combine_cf,
    det,
    generate_worksheet,
    inverse,
    template_ids,
    validate_kb,
)

__all__ = [
    "Api",
    "EngineError",
    "KbError",
    "MatError",
    "Session",
    "WorksheetError",
    "canonical_kb",
    "combine_cf",
    "det",
    "generate_worksheet",
    "inverse",
    "template_ids",
    "validate_kb",
]
