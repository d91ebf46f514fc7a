"""Feature ranking, random-forest training and cross-validated evaluation."""

from .evaluation import EvalReport, EvaluationError, cross_validate, format_table, report_document, stratified_folds
from .forest import ForestConfig, ForestConfigError, ForestModel, ModelFormatError, predict_proba, train_forest
from .infogain import entropy, info_gain, mdl_cut_points, rank_features
from .metrics import confusion_matrix, f_measure, roc_auc

__all__ = [
    "EvalReport",
    "EvaluationError",
    "ForestConfig",
    "ForestConfigError",
    "ForestModel",
    "ModelFormatError",
    "confusion_matrix",
    "cross_validate",
    "entropy",
    "f_measure",
    "format_table",
    "info_gain",
    "mdl_cut_points",
    "predict_proba",
    "rank_features",
    "report_document",
    "roc_auc",
    "stratified_folds",
    "train_forest",
]
