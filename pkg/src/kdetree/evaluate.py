"""One-class evaluation: confusion counts, P/R/F1, CV tuning, benchmarks.

Counts follow the one-class reading of a confusion matrix: true/false
targets (``tt``/``ft``) and true/false outliers (``to``/``fo``). Precision
is ``TT / (TT + FT)``, recall ``TT / (TT + FO)`` and F1 their harmonic
mean; 0/0 is defined as 0 throughout so a model predicting no targets
cannot score well.

Cross-validation folds are built from target instances only; any
outlier-labeled rows join every validation fold (they are never trained
on). The benchmark runner reproduces the two standard conversions of a
multi-class source into one-class problems: merging all classes and
injecting uniform noise (approach A), or one-vs-rest with sampled
counter-class outliers (approach B).
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

import numpy as np

from . import tree as tree_mod
from .dataset import (Dataset, OUTLIER, TARGET, inject_uniform_outliers,
                      one_vs_rest, train_test_split)
from .tree import Hyperparams


@dataclass(frozen=True)
class ConfusionCounts:
    """tt/ft: rows predicted target; to/fo: rows predicted outlier."""

    tt: int
    ft: int
    fo: int
    to: int

    @property
    def total(self) -> int:
        return self.tt + self.ft + self.fo + self.to


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class CvResult:
    """Winning parameters plus the (params, mean F1) table in grid order."""

    best_params: Hyperparams
    table: tuple[tuple[Hyperparams, float], ...]


@dataclass(frozen=True)
class BenchmarkRow:
    dataset: str
    variant: str
    noise_level: float
    precision: float
    recall: float
    f1: float
    chosen_alpha: float
    chosen_nu: float
    train_accuracy: float
    target_leaves: int
    seconds: float


REPORT_COLUMNS = ("dataset", "variant", "noise_level", "precision", "recall",
                  "f1", "chosen_alpha", "chosen_nu", "train_accuracy",
                  "target_leaves", "seconds")


def confusion(predicted, actual) -> ConfusionCounts:
    """Count tt/ft/fo/to from parallel predicted and actual label lists."""
    predicted = list(predicted)
    actual = list(actual)
    if len(predicted) != len(actual):
        raise ValueError(
            f"{len(predicted)} predictions for {len(actual)} actual labels"
        )
    tt = ft = fo = to = 0
    for pred, act in zip(predicted, actual):
        if pred not in (TARGET, OUTLIER) or act not in (TARGET, OUTLIER):
            raise ValueError(f"labels must be {TARGET!r} or {OUTLIER!r}, "
                             f"got ({pred!r}, {act!r})")
        if pred == TARGET:
            if act == TARGET:
                tt += 1
            else:
                ft += 1
        else:
            if act == TARGET:
                fo += 1
            else:
                to += 1
    return ConfusionCounts(tt, ft, fo, to)


def metrics(c: ConfusionCounts) -> MetricsReport:
    """Precision, recall and F1 with the 0/0 := 0 convention."""
    precision = c.tt / (c.tt + c.ft) if c.tt + c.ft > 0 else 0.0
    recall = c.tt / (c.tt + c.fo) if c.tt + c.fo > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return MetricsReport(precision, recall, f1)


def kfold_cv_grid_search(train: Dataset, grid, k: int, seed: int) -> CvResult:
    """Pick the grid point with the best mean F1 over k seeded folds.

    Folds partition the target instances; outlier-labeled instances are
    appended to every validation fold. Ties keep the first grid point.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("parameter grid is empty")
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    if train.labels is None:
        target_idx = np.arange(train.n)
        outlier_idx = np.array([], dtype=int)
    else:
        labels = np.array(train.labels)
        unknown = set(labels) - {TARGET, OUTLIER}
        if unknown:
            raise ValueError(f"unexpected labels in CV data: {sorted(unknown)}")
        target_idx = np.flatnonzero(labels == TARGET)
        outlier_idx = np.flatnonzero(labels == OUTLIER)
    if len(target_idx) < k:
        raise ValueError(f"{k} folds but only {len(target_idx)} target instances")

    rng = np.random.default_rng(seed)
    folds = np.array_split(target_idx[rng.permutation(len(target_idx))], k)
    outlier_values = train.values[outlier_idx]
    outlier_actual = [OUTLIER] * len(outlier_idx)

    table = []
    best = None
    best_score = -1.0
    for params in grid:
        scores = []
        for i, fold in enumerate(folds):
            fit_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
            model = tree_mod.fit(train.subset(fit_idx), params)
            val_values = np.vstack([train.values[fold], outlier_values])
            predicted = tree_mod.predict_many(model, val_values)
            actual = [TARGET] * len(fold) + outlier_actual
            scores.append(metrics(confusion(predicted, actual)).f1)
        mean_f1 = float(np.mean(scores))
        table.append((params, mean_f1))
        if mean_f1 > best_score:
            best, best_score = params, mean_f1
    return CvResult(best_params=best, table=tuple(table))


def run_benchmark(source: Dataset, approach: str, noise_levels, params_grid,
                  seed: int, *, folds: int = 10, dataset_name: str = "dataset",
                  train_fraction: float = 2 / 3) -> list[BenchmarkRow]:
    """Tune, fit and score one-class problems derived from a labeled source.

    Approach ``"A"`` merges every class into one target set and injects
    uniform noise into the train and test parts independently at each
    level; approach ``"B"`` runs one-vs-rest per class, sampling real
    counter-class rows as outliers. Each variant is split 2/3 - 1/3, tuned
    with :func:`kfold_cv_grid_search` on the training part, refitted on all
    training targets and scored on the test part. One row per
    (variant, noise level).
    """
    if approach not in ("A", "B"):
        raise ValueError(f"approach must be 'A' or 'B', got {approach!r}")
    params_grid = list(params_grid)
    if any(level < 0 for level in noise_levels):
        raise ValueError("noise levels must be >= 0")
    rng = np.random.default_rng(seed)

    def next_seed() -> int:
        return int(rng.integers(0, 2**63))

    if approach == "B":
        if source.labels is None:
            raise ValueError("approach B requires class labels")
        classes = list(dict.fromkeys(source.labels))
    rows: list[BenchmarkRow] = []
    for level in noise_levels:
        if approach == "A":
            variants = [("all", None)]
        else:
            variants = [(cls, cls) for cls in classes]
        for variant_name, cls in variants:
            started = time.perf_counter()
            if approach == "A":
                base = Dataset(source.values, source.attribute_names)
                train_part, test_part = train_test_split(base, train_fraction,
                                                         next_seed())
                train_part = inject_uniform_outliers(train_part, level, next_seed())
                test_part = inject_uniform_outliers(test_part, level, next_seed())
            else:
                one_class = one_vs_rest(source, cls, level, next_seed())
                train_part, test_part = train_test_split(one_class, train_fraction,
                                                         next_seed())
            cv = kfold_cv_grid_search(train_part, params_grid, folds, next_seed())
            model = tree_mod.fit(train_part.only(TARGET), cv.best_params)
            predicted = tree_mod.predict_many(model, test_part.values)
            report = metrics(confusion(predicted, test_part.labels))
            rows.append(BenchmarkRow(
                dataset=dataset_name,
                variant=variant_name,
                noise_level=float(level),
                precision=report.precision,
                recall=report.recall,
                f1=report.f1,
                chosen_alpha=cv.best_params.alpha,
                chosen_nu=cv.best_params.nu,
                train_accuracy=model.training_accuracy,
                target_leaves=tree_mod.leaf_count(model),
                seconds=time.perf_counter() - started,
            ))
    return rows


def report_to_csv(rows, extra_columns: dict[str, list] | None = None) -> str:
    """Serialize benchmark rows to CSV text (full float precision)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    extra = extra_columns or {}
    writer.writerow(list(REPORT_COLUMNS) + list(extra))
    for i, row in enumerate(rows):
        record = [row.dataset, row.variant, repr(float(row.noise_level)),
                  repr(float(row.precision)), repr(float(row.recall)),
                  repr(float(row.f1)), repr(float(row.chosen_alpha)),
                  repr(float(row.chosen_nu)), repr(float(row.train_accuracy)),
                  row.target_leaves, repr(float(row.seconds))]
        record += [extra[name][i] for name in extra]
        writer.writerow(record)
    return buf.getvalue()
