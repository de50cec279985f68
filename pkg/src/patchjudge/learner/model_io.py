"""Model persistence: a versioned JSON document.

Serialization is byte-deterministic: keys sorted, floats via repr through
the json encoder, no timestamps.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import SchemaMismatchError
from .gbdt import Hyperparams, Model

FORMAT = "patchjudge-model-1"


def model_to_json(model: Model) -> str:
    doc = {
        "format": FORMAT,
        "schema_version": model.schema_version,
        "feature_names": list(model.feature_names),
        "hyperparams": model.hyperparams.to_dict(),
        "base_score": model.base_score,
        "trees": model.trees,
        "split_counts": model.split_counts,
        "meta": model.meta,
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model))


def load_model(path: str | Path) -> Model:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaMismatchError(f"cannot read model file {path}: {exc}") from exc
    if doc.get("format") != FORMAT:
        raise SchemaMismatchError(
            f"{path} is not a {FORMAT} document (found {doc.get('format')!r})"
        )
    return Model(
        schema_version=doc["schema_version"],
        feature_names=tuple(doc["feature_names"]),
        hyperparams=Hyperparams.from_dict(doc["hyperparams"]),
        base_score=doc["base_score"],
        trees=doc["trees"],
        split_counts={k: int(v) for k, v in doc["split_counts"].items()},
        meta=doc.get("meta", {}),
    )
