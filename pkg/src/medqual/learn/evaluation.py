"""Stratified k-fold cross-validation and evaluation reports."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..corpus import QUALITY_CLASSES
from ..dataset import Dataset
from ..sampling import SmoteConfig, smote
from .forest import ForestConfig, train_forest
from .infogain import info_gain
from .metrics import confusion_matrix, f_measure, roc_auc

REPORT_FORMAT_VERSION = 1


class EvaluationError(ValueError):
    pass


@dataclass
class EvalReport:
    confusion: np.ndarray
    per_class_f: dict[str, float]
    per_class_roc: dict[str, float]
    info_gain: dict[str, float]
    class_list: tuple[str, ...] = QUALITY_CLASSES
    variant: str = ""
    folds: int = 10

    @property
    def macro_f(self) -> float:
        """Mean F-measure over the classes present in the data."""
        present = [c for i, c in enumerate(self.class_list) if self.confusion[i].sum() > 0]
        return float(np.mean([self.per_class_f[c] for c in present])) if present else 0.0

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "folds": self.folds,
            "class_list": list(self.class_list),
            "confusion": self.confusion.tolist(),
            "roc_area": self.per_class_roc,
            "f_measure": self.per_class_f,
            "macro_f_measure": self.macro_f,
            "info_gain": self.info_gain,
        }


def stratified_folds(labels: Sequence[str], folds: int, seed: int) -> np.ndarray:
    """Fold number for every row.

    Within each class the rows are shuffled, then dealt round-robin; the
    dealing position carries over from one class to the next so fold sizes
    stay within one of each other.
    """
    labels = np.asarray(labels, dtype=object)
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.intp)
    position = 0
    present = [c for c in QUALITY_CLASSES if np.any(labels == c)]
    present += sorted({str(c) for c in labels} - set(present))
    for cls in present:
        members = np.flatnonzero(labels == cls)
        if len(members) < folds:
            raise EvaluationError(
                f"class {cls} has {len(members)} instances, fewer than the {folds} folds"
            )
        members = rng.permutation(members)
        assignment[members] = (position + np.arange(len(members))) % folds
        position = (position + len(members)) % folds
    return assignment


def cross_validate(
    data: Dataset,
    cfg: ForestConfig,
    folds: int = 10,
    seed: int = 0,
    smote_cfg: SmoteConfig | None = None,
    variant: str = "",
) -> EvalReport:
    """Pooled out-of-fold predictions of a forest under stratified k-fold CV.

    With ``smote_cfg`` the oversampling is applied to each training split
    only. Information gain is measured on the whole input.
    """
    if folds < 2:
        raise EvaluationError(f"need at least 2 folds, got {folds}")
    class_list = QUALITY_CLASSES
    assignment = stratified_folds(data.labels, folds, seed)
    y = data.class_codes(class_list)
    probs = np.zeros((len(data), len(class_list)))
    for k in range(folds):
        test = np.flatnonzero(assignment == k)
        train = data.subset(np.flatnonzero(assignment != k))
        if smote_cfg is not None and smote_cfg.percent:
            train = smote(train, smote_cfg)
        fold_seed = int(np.random.SeedSequence([cfg.seed, k]).generate_state(1)[0])
        fold_cfg = ForestConfig(
            cfg.num_trees, cfg.features_per_split, cfg.min_leaf, cfg.max_depth, fold_seed, cfg.n_jobs
        )
        model = train_forest(train, fold_cfg, class_list)
        probs[test] = model.predict_proba(data.X[test])
    predicted = np.argmax(probs, axis=1)
    cm = confusion_matrix(y, predicted, len(class_list))
    per_f = {c: f_measure(cm, i) for i, c in enumerate(class_list)}
    per_roc = {c: roc_auc(probs[:, i], y == i) for i, c in enumerate(class_list)}
    gains = {name: info_gain(data, name) for name in data.feature_names}
    return EvalReport(cm, per_f, per_roc, gains, class_list, variant, folds)


def report_document(reports: Mapping[str, EvalReport]) -> str:
    """JSON document with one column per model variant.

    ``table`` mirrors a results table: a row per metric and class, a
    value per variant.
    """
    names = list(reports)
    class_list = next(iter(reports.values())).class_list if reports else QUALITY_CLASSES
    rows = []
    for metric, attr in (("ROC Area", "per_class_roc"), ("F-Measure", "per_class_f")):
        for cls in class_list:
            rows.append([f"{metric} {cls}"] + [round(getattr(reports[v], attr)[cls], 6) for v in names])
    doc = {
        "format_version": REPORT_FORMAT_VERSION,
        "variants": names,
        "table": rows,
        "reports": {v: reports[v].to_dict() for v in names},
    }
    return json.dumps(doc, indent=2) + "\n"


def format_table(reports: Mapping[str, EvalReport]) -> str:
    """Plain-text rendering of the per-class ROC/F table."""
    names = list(reports)
    doc = json.loads(report_document(reports))
    width = max([len(r[0]) for r in doc["table"]] + [6])
    lines = ["Metric".ljust(width) + "".join(f"  {n:>17}" for n in names)]
    for row in doc["table"]:
        lines.append(row[0].ljust(width) + "".join(f"  {v:>17.3f}" for v in row[1:]))
    lines.append("macro F".ljust(width) + "".join(f"  {reports[n].macro_f:>17.3f}" for n in names))
    return "\n".join(lines)
