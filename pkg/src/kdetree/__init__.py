"""One-class decision trees with kernel-density-driven interval splits.

The model encloses a single target class in axis-aligned hyper-rectangles:
each split thresholds a per-attribute Gaussian kernel density estimate,
keeps the high-density intervals, and sends everything else down an
implicit "else -> outlier" branch. Fitted trees read off directly as
interval-conjunction rules.

Typical use::

    from kdetree import dataset, tree

    ds = dataset.load_csv("train.csv")
    model = tree.fit(ds, tree.Hyperparams(alpha=1.0, beta=0.0, nu=0.1))
    labels = tree.predict_many(model, ds.values)
    rules = tree.extract_rules(model)
"""

from . import cli, dataset, evaluate, kde, model_io, split, tree
from .dataset import (Dataset, OUTLIER, TARGET, gaussian_blobs,
                      inject_uniform_outliers, load_csv, one_vs_rest,
                      train_test_split, write_csv)
from .evaluate import (BenchmarkRow, ConfusionCounts, CvResult, MetricsReport,
                       confusion, kfold_cv_grid_search, metrics,
                       report_to_csv, run_benchmark)
from .kde import DensityGrid, KdeModel, silverman_bandwidth
from .model_io import load_model, save_model
from .split import Interval, SplitCandidate, SplitParams
from .tree import (Hyperparams, Node, OneClassTree, ensemble_predict,
                   extract_rules, leaf_count, predict, predict_many,
                   training_accuracy)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRow", "ConfusionCounts", "CvResult", "Dataset", "DensityGrid",
    "Hyperparams", "Interval", "KdeModel", "MetricsReport", "Node", "OUTLIER",
    "OneClassTree", "SplitCandidate", "SplitParams", "TARGET", "cli",
    "confusion", "dataset", "ensemble_predict", "evaluate", "extract_rules",
    "gaussian_blobs", "inject_uniform_outliers", "kde", "kfold_cv_grid_search",
    "leaf_count", "load_csv", "load_model", "metrics", "model_io",
    "one_vs_rest", "predict", "predict_many", "report_to_csv",
    "run_benchmark", "save_model", "silverman_bandwidth", "split",
    "train_test_split", "training_accuracy", "tree", "write_csv",
]
