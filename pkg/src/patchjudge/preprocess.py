"""Dataset cleaning: Tukey outlier pruning and minority oversampling."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .dataset import Dataset, LABEL_CORRECT, LABEL_OVERFITTING
from .errors import EmptyDatasetError, SingleClassError, TooFewMinorityError

TUKEY_MULTIPLIER = 1.5


def tukey_fences(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column [Q1 - 1.5*IQR, Q3 + 1.5*IQR], linear-interpolated quartiles."""
    q1 = np.quantile(X, 0.25, axis=0, method="linear")
    q3 = np.quantile(X, 0.75, axis=0, method="linear")
    iqr = q3 - q1
    return q1 - TUKEY_MULTIPLIER * iqr, q3 + TUKEY_MULTIPLIER * iqr


def prune_outliers(ds: Dataset, min_outlied: int = 15) -> Dataset:
    """Remove rows with at least min_outlied values outside their column fences.

    Quartiles come from the pre-pruning dataset; surviving rows are
    unchanged.  Constant columns have degenerate fences that keep every
    equal value inside.
    """
    if ds.n_rows == 0:
        raise EmptyDatasetError("cannot prune an empty dataset")
    if "resampled" in ds.provenance:
        raise ValueError("outlier pruning must run before resampling")
    lo, hi = tukey_fences(ds.X)
    outlied = ((ds.X < lo) | (ds.X > hi)).sum(axis=1)
    keep = np.flatnonzero(outlied < min_outlied)
    return ds.subset(keep).with_provenance("outlier-pruned")


def smote_minority(ds: Dataset, k: int = 5, seed: int = 42) -> Dataset:
    """Oversample the minority class to the majority count.

    Each synthetic row is x + u * (nn - x) for a random minority row x, one
    of its k nearest minority neighbours nn (Euclidean) and u ~ U[0,1].
    Majority rows pass through untouched; synthetic rows get generated patch
    ids with their base/neighbour recorded in ``origins``.
    """
    labels = ds.y
    n_over = int((labels == LABEL_OVERFITTING).sum())
    n_corr = int((labels == LABEL_CORRECT).sum())
    if n_over == 0 or n_corr == 0:
        raise SingleClassError("both classes are required for resampling")
    if n_over == n_corr:
        return ds.with_provenance("resampled")
    minority_label = LABEL_CORRECT if n_corr < n_over else LABEL_OVERFITTING
    minority_idx = np.flatnonzero(labels == minority_label)
    n_min = len(minority_idx)
    if n_min < 2:
        raise TooFewMinorityError(f"minority class has {n_min} row(s); need at least 2")
    n_new = abs(n_over - n_corr)

    minority = ds.X[minority_idx]
    # pairwise distances within the minority class; self excluded via +inf
    diff = minority[:, None, :] - minority[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dist, np.inf)
    k_eff = min(k, n_min - 1)
    neighbor_table = np.argsort(dist, axis=1, kind="stable")[:, :k_eff]

    rng = np.random.default_rng(seed)
    new_rows = np.empty((n_new, ds.X.shape[1]), dtype=np.float64)
    new_ids, new_projects, new_tools = [], [], []
    origins = dict(ds.origins)
    for i in range(n_new):
        base = int(rng.integers(n_min))
        neighbor = int(neighbor_table[base, int(rng.integers(k_eff))])
        u = float(rng.random())
        new_rows[i] = minority[base] + u * (minority[neighbor] - minority[base])
        base_id = ds.patch_ids[minority_idx[base]]
        neighbor_id = ds.patch_ids[minority_idx[neighbor]]
        synth_id = f"smote-{i:05d}"
        new_ids.append(synth_id)
        new_projects.append("synthetic")
        new_tools.append("synthetic")
        origins[synth_id] = (base_id, neighbor_id)

    out = replace(
        ds,
        patch_ids=ds.patch_ids + new_ids,
        projects=ds.projects + new_projects,
        tools=ds.tools + new_tools,
        X=np.vstack([ds.X, new_rows]),
        y=np.concatenate(
            [ds.y, np.full(n_new, minority_label, dtype=np.int64)]
        ),
        origins=origins,
    )
    return out.with_provenance("resampled")
