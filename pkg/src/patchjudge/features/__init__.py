"""Feature extraction: 202 raw features per AST diff, vector encoding."""

from __future__ import annotations

from ..ast_core.tree import NormalizedAst
from ..diffing import EditScript
from .code_description import extract_code_description as _code_description
from .context import DiffView
from .contextual import extract_contextual as _contextual
from .encode import FeatureVector, encode
from .repair_patterns import extract_repair_patterns as _repair_patterns
from .schema import FeatureSchema, build_schema


def extract_code_description(
    buggy: NormalizedAst, patched: NormalizedAst, script: EditScript
) -> dict[str, int]:
    """150 window flags (SRC/FORMER/LATTER x 50)."""
    return _code_description(DiffView(buggy, patched, script))


def extract_repair_patterns(
    buggy: NormalizedAst, patched: NormalizedAst, script: EditScript
) -> dict[str, int]:
    """26 repair-pattern flags."""
    return _repair_patterns(DiffView(buggy, patched, script))


def extract_contextual(
    buggy: NormalizedAst, patched: NormalizedAst, script: EditScript
) -> dict[str, int | str]:
    """26 contextual values: 9 statement-kind strings + 17 flags."""
    return _contextual(DiffView(buggy, patched, script))


def extract_diff_features(
    buggy: NormalizedAst, patched: NormalizedAst, script: EditScript
) -> dict[str, int | str]:
    """All 202 raw features for one file-pair diff."""
    view = DiffView(buggy, patched, script)
    raw: dict[str, int | str] = {}
    raw.update(_code_description(view))
    raw.update(_repair_patterns(view))
    raw.update(_contextual(view))
    return raw


__all__ = [
    "DiffView",
    "FeatureSchema",
    "FeatureVector",
    "build_schema",
    "encode",
    "extract_code_description",
    "extract_contextual",
    "extract_diff_features",
    "extract_repair_patterns",
]
