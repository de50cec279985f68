"""Training-ready datasets and the comma-separated matrix file format.

Matrix file: one header row ``patch_id,project,tool,label,<col...>`` with
the expanded feature columns in schema order, then one row per patch.
Labels are 0 (correct) / 1 (overfitting); the label cell is empty for
unlabeled patches.  A sidecar ``<name>.provenance.json`` records the schema
version and the processing flags.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import SchemaMismatchError
from .features.schema import FeatureSchema, build_schema

LABEL_CORRECT = 0
LABEL_OVERFITTING = 1
UNLABELED = -1

PROVENANCE_FLAGS = ("raw", "deduplicated", "outlier-pruned", "resampled")


@dataclass
class Dataset:
    schema_version: str
    feature_names: tuple[str, ...]
    patch_ids: list[str]
    projects: list[str]
    tools: list[str]
    X: np.ndarray  # float64 (rows, expanded columns)
    y: np.ndarray  # int64; -1 marks unlabeled rows
    provenance: tuple[str, ...] = ("raw",)
    origins: dict[str, tuple[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.X.shape != (len(self.patch_ids), len(self.feature_names)):
            raise SchemaMismatchError(
                f"matrix shape {self.X.shape} does not match "
                f"{len(self.patch_ids)} rows x {len(self.feature_names)} columns"
            )
        if len(self.y) != len(self.patch_ids):
            raise SchemaMismatchError("label count does not match row count")

    @property
    def n_rows(self) -> int:
        return len(self.patch_ids)

    @property
    def labeled(self) -> bool:
        return bool(len(self.y)) and bool((self.y != UNLABELED).all())

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        ids = [self.patch_ids[i] for i in indices]
        return replace(
            self,
            patch_ids=ids,
            projects=[self.projects[i] for i in indices],
            tools=[self.tools[i] for i in indices],
            X=self.X[indices].copy(),
            y=self.y[indices].copy(),
            origins={k: v for k, v in self.origins.items() if k in set(ids)},
        )

    def select_columns(self, indices, names) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return replace(self, X=self.X[:, indices].copy(), feature_names=tuple(names))

    def with_provenance(self, flag: str) -> "Dataset":
        if flag not in PROVENANCE_FLAGS:
            raise ValueError(f"unknown provenance flag {flag!r}")
        if flag in self.provenance:
            return self
        return replace(self, provenance=self.provenance + (flag,))


def dataset_from_rows(rows, schema: FeatureSchema, provenance=("raw",)) -> Dataset:
    """rows: iterable of (patch_id, project, tool, label_int_or_None, vector)."""
    ids, projects, tools, labels, vectors = [], [], [], [], []
    for patch_id, project, tool, label, vector in rows:
        if vector.schema_version != schema.version:
            raise SchemaMismatchError(
                f"vector for {patch_id} has schema {vector.schema_version!r}, "
                f"expected {schema.version!r}"
            )
        ids.append(patch_id)
        projects.append(project)
        tools.append(tool)
        labels.append(UNLABELED if label is None else int(label))
        vectors.append(vector.values)
    X = (
        np.asarray(vectors, dtype=np.float64)
        if vectors
        else np.zeros((0, schema.expanded_length))
    )
    return Dataset(
        schema.version,
        schema.expanded_columns,
        ids,
        projects,
        tools,
        X,
        np.asarray(labels, dtype=np.int64),
        tuple(provenance),
    )


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def write_matrix(path: str | Path, ds: Dataset) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["patch_id", "project", "tool", "label", *ds.feature_names])
        for i, patch_id in enumerate(ds.patch_ids):
            label = "" if ds.y[i] == UNLABELED else str(int(ds.y[i]))
            writer.writerow(
                [patch_id, ds.projects[i], ds.tools[i], label]
                + [_format_value(v) for v in ds.X[i]]
            )
    sidecar = {
        "schema_version": ds.schema_version,
        "provenance": list(ds.provenance),
        "rows": ds.n_rows,
        "columns": len(ds.feature_names),
    }
    Path(str(path) + ".provenance.json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n"
    )


def read_matrix(path: str | Path, schema: FeatureSchema | None = None) -> Dataset:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[:4] != ["patch_id", "project", "tool", "label"]:
            raise SchemaMismatchError(f"{path} is not a feature matrix file")
        names = tuple(header[4:])
        rows = list(reader)

    sidecar_path = Path(str(path) + ".provenance.json")
    provenance: tuple[str, ...] = ("raw",)
    version = None
    if sidecar_path.is_file():
        sidecar = json.loads(sidecar_path.read_text())
        provenance = tuple(sidecar.get("provenance", ["raw"]))
        version = sidecar.get("schema_version")
    if schema is None:
        schema = build_schema(version or "1")
    if names != schema.expanded_columns:
        raise SchemaMismatchError(
            f"{path} columns do not match feature schema {schema.version!r}"
        )

    ids, projects, tools, labels = [], [], [], []
    X = np.zeros((len(rows), len(names)), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) != 4 + len(names):
            raise SchemaMismatchError(f"{path} row {i + 2} has {len(row)} cells")
        ids.append(row[0])
        projects.append(row[1])
        tools.append(row[2])
        labels.append(UNLABELED if row[3] == "" else int(row[3]))
        X[i] = [float(v) for v in row[4:]]
    return Dataset(
        schema.version,
        schema.expanded_columns,
        ids,
        projects,
        tools,
        X,
        np.asarray(labels, dtype=np.int64),
        provenance,
    )
