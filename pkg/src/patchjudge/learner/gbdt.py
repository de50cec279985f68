"""Gradient-boosted regression trees with a logistic link, built from scratch.

Training is deterministic: exact greedy split enumeration over midpoint
thresholds, ties broken by lowest feature index then lowest threshold, no
sampling anywhere.  Loss is binary logistic; leaf weights are the damped
Newton step -G/(H + lambda) scaled by the learning rate, with L2 term
lambda = 1.  Splits whose gain falls below min_split_gain are rejected; a
round whose root cannot split ends training (predictions would no longer
change).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..dataset import Dataset, LABEL_OVERFITTING, UNLABELED
from ..errors import SchemaMismatchError
from .kernels import split_scan

L2_LAMBDA = 1.0
_PRIOR_CLIP = 1e-6

OVERFITTING, CORRECT = "overfitting", "correct"


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 0.3
    max_depth: int = 6
    min_split_gain: float = 0.5
    rounds: int = 100
    seed: int = 42

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperparams":
        return cls(**data)


@dataclass
class Model:
    schema_version: str
    feature_names: tuple[str, ...]
    hyperparams: Hyperparams
    base_score: float
    trees: list[dict]
    split_counts: dict[str, int]
    meta: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def log_loss(y: np.ndarray, proba: np.ndarray) -> float:
    p = np.clip(proba, 1e-12, 1 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


def train(ds: Dataset, hp: Hyperparams | None = None) -> Model:
    """Fit the boosted ensemble on a labeled dataset.

    A single-class dataset yields the degenerate model: no trees, base
    score at the (clipped) prior log-odds.
    """
    hp = hp or Hyperparams()
    if (ds.y == UNLABELED).any():
        raise ValueError("training requires labels on every row")
    X = np.ascontiguousarray(ds.X, dtype=np.float64)
    y = (ds.y == LABEL_OVERFITTING).astype(np.float64)
    n, m = X.shape
    if n == 0:
        raise ValueError("training requires at least one row")

    prior = float(np.clip(y.mean(), _PRIOR_CLIP, 1 - _PRIOR_CLIP))
    base_score = float(np.log(prior / (1 - prior)))
    preds = np.full(n, base_score, dtype=np.float64)

    sorted_idx = np.argsort(X, axis=0, kind="stable")
    split_counts: dict[str, int] = {}
    trees: list[dict] = []
    loss_curve = [log_loss(y, _sigmoid(preds))]

    for _ in range(hp.rounds):
        p = _sigmoid(preds)
        grad = p - y
        hess = p * (1 - p)
        root_rows = np.ones(n, dtype=bool)
        tree = _build_node(
            X, grad, hess, sorted_idx, root_rows, 0, hp, preds, split_counts, ds
        )
        if tree.pop("_no_split_root", False):
            # no gainful root split: further rounds cannot change predictions
            break
        trees.append(tree)
        loss_curve.append(log_loss(y, _sigmoid(preds)))

    counts = {name: split_counts.get(name, 0) for name in ds.feature_names}
    return Model(
        schema_version=ds.schema_version,
        feature_names=tuple(ds.feature_names),
        hyperparams=hp,
        base_score=base_score,
        trees=trees,
        split_counts=counts,
        meta={
            "rounds_completed": len(trees),
            "training_rows": n,
            "loss_curve": loss_curve,
        },
    )


def _build_node(X, grad, hess, sorted_idx, rows, depth, hp, preds, split_counts, ds):
    n_rows = int(rows.sum())
    best_gain = -np.inf
    best_feature = -1
    best_thr = 0.0
    if depth < hp.max_depth and n_rows >= 2:
        for j in range(X.shape[1]):
            order = sorted_idx[:, j]
            order = order[rows[order]]
            values = np.ascontiguousarray(X[order, j])
            g = np.ascontiguousarray(grad[order])
            h = np.ascontiguousarray(hess[order])
            gain, thr, _ = split_scan(values, g, h, L2_LAMBDA)
            if gain > best_gain:
                best_gain = gain
                best_feature = j
                best_thr = float(thr)

    if best_feature < 0 or best_gain < hp.min_split_gain:
        g_sum = float(grad[rows].sum())
        h_sum = float(hess[rows].sum())
        weight = -g_sum / (h_sum + L2_LAMBDA) * hp.learning_rate
        preds[rows] += weight
        leaf = {"leaf": weight}
        if depth == 0:
            leaf["_no_split_root"] = True
        return leaf

    left_rows = rows & (X[:, best_feature] < best_thr)
    right_rows = rows & ~(X[:, best_feature] < best_thr)
    if not left_rows.any() or not right_rows.any():
        # degenerate midpoint rounding; refuse the split
        g_sum = float(grad[rows].sum())
        h_sum = float(hess[rows].sum())
        weight = -g_sum / (h_sum + L2_LAMBDA) * hp.learning_rate
        preds[rows] += weight
        leaf = {"leaf": weight}
        if depth == 0:
            leaf["_no_split_root"] = True
        return leaf

    name = ds.feature_names[best_feature]
    split_counts[name] = split_counts.get(name, 0) + 1
    return {
        "feature": int(best_feature),
        "threshold": best_thr,
        "gain": float(best_gain),
        "left": _build_node(
            X, grad, hess, sorted_idx, left_rows, depth + 1, hp, preds, split_counts, ds
        ),
        "right": _build_node(
            X, grad, hess, sorted_idx, right_rows, depth + 1, hp, preds, split_counts, ds
        ),
    }


def _tree_output(tree: dict, x: np.ndarray) -> float:
    node = tree
    while "leaf" not in node:
        node = node["left"] if x[node["feature"]] < node["threshold"] else node["right"]
    return node["leaf"]


def raw_score(model: Model, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise SchemaMismatchError(
            f"vector length {X.shape[1]} does not match model ({model.n_features})"
        )
    scores = np.full(X.shape[0], model.base_score, dtype=np.float64)
    for tree in model.trees:
        for i in range(X.shape[0]):
            scores[i] += _tree_output(tree, X[i])
    return scores


def predict_proba(model: Model, vector, schema_version: str | None = None):
    """Overfitting probability: logistic(base + sum of tree outputs)."""
    if schema_version is not None and schema_version != model.schema_version:
        raise SchemaMismatchError(
            f"vector schema {schema_version!r} does not match model "
            f"{model.schema_version!r}"
        )
    arr = np.asarray(vector, dtype=np.float64)
    single = arr.ndim == 1
    proba = _sigmoid(raw_score(model, arr))
    return float(proba[0]) if single else proba


def classify(model: Model, vector, threshold: float = 0.5):
    """'overfitting' iff predicted probability >= threshold (inclusive)."""
    proba = predict_proba(model, vector)
    if isinstance(proba, float):
        return OVERFITTING if proba >= threshold else CORRECT
    return np.where(proba >= threshold, OVERFITTING, CORRECT)


def feature_importance(model: Model) -> dict[str, int]:
    """Split occurrences per expanded column; never-split features map to 0."""
    return {name: model.split_counts.get(name, 0) for name in model.feature_names}
