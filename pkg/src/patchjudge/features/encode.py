"""Vector encoding: raw per-diff features -> accumulated numeric vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SchemaMismatchError
from .schema import FeatureSchema


@dataclass
class FeatureVector:
    schema_version: str
    values: np.ndarray  # int64, length == schema.expanded_length


def encode(per_diff: list[dict], schema: FeatureSchema) -> FeatureVector:
    """One-hot-expand and accumulate per-diff raw features.

    Binary flags map to 0/1 columns; each string feature activates exactly
    one vocabulary column per diff.  Vectors from multiple file-pair diffs
    are summed element-wise, so entries count occurrences across diffs.
    """
    if not per_diff:
        raise SchemaMismatchError("a patch must change at least one file")
    values = np.zeros(schema.expanded_length, dtype=np.int64)
    expected = set(schema.names)
    for raw in per_diff:
        if set(raw) != expected:
            missing = expected - set(raw)
            extra = set(raw) - expected
            raise SchemaMismatchError(
                f"raw features do not match schema (missing={sorted(missing)[:3]}, "
                f"extra={sorted(extra)[:3]})"
            )
        for entry in schema.entries:
            value = raw[entry.name]
            if entry.kind == "binary":
                if value not in (0, 1, True, False):
                    raise SchemaMismatchError(
                        f"binary feature {entry.name} has value {value!r}"
                    )
                values[schema.column_index[entry.name]] += int(value)
            else:
                if value not in schema.string_vocab[entry.name]:
                    raise SchemaMismatchError(
                        f"string feature {entry.name} has value {value!r} outside vocab"
                    )
                values[schema.column_index[f"{entry.name}_{value}"]] += 1
    return FeatureVector(schema.version, values)
