"""Command-line interface: train, predict, rules, evaluate, benchmark."""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import evaluate as evaluate_mod
from . import model_io
from . import tree as tree_mod
from .dataset import Dataset, OUTLIER, TARGET, load_csv
from .tree import Hyperparams

TABLE_GRID = "alpha=0.5,0.6,0.7,0.8;nu=0.05,0.1,0.15,0.2"


def _parse_grid_spec(spec: str, base: Hyperparams) -> list[Hyperparams]:
    """Grid spec like ``alpha=0.5,0.6;nu=0.05,0.1`` -> Hyperparams list.

    Axes appear in declaration order, first axis outermost; unlisted
    parameters keep the values of `base`.
    """
    if spec == "default":
        spec = TABLE_GRID
    axes: list[tuple[str, list[float]]] = []
    allowed = {"gamma", "alpha", "beta", "nu"}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        name, _, values = part.partition("=")
        name = name.strip()
        if name not in allowed:
            raise ValueError(f"unknown grid parameter {name!r} "
                             f"(expected one of {sorted(allowed)})")
        axes.append((name, [float(v) for v in values.split(",") if v.strip()]))
    if not axes:
        raise ValueError(f"empty grid spec: {spec!r}")
    grid = [base]
    for name, values in axes:
        grid = [
            dataclasses.replace(p, **{name: value})
            for p in grid
            for value in values
        ]
    return grid


def _hyperparams_from_args(args) -> Hyperparams:
    return Hyperparams(gamma=args.gamma, alpha=args.alpha, beta=args.beta,
                       nu=args.nu, grid_points=args.grid_points,
                       min_leaf=args.min_leaf)


def _add_param_flags(parser) -> None:
    parser.add_argument("--gamma", type=float, default=0.05,
                        help="density clipping level (fraction of the peak)")
    parser.add_argument("--alpha", type=float, default=0.5,
                        help="minimum-depth ratio for interval revision")
    parser.add_argument("--beta", type=float, default=0.02,
                        help="minimum interval support as a fraction of the "
                             "training set (0 disables the floor)")
    parser.add_argument("--nu", type=float, default=0.1,
                        help="tolerated fraction of rejected training instances")
    parser.add_argument("--grid-points", type=int, default=512,
                        help="density evaluation grid size per attribute")
    parser.add_argument("--min-leaf", type=int, default=5,
                        help="absolute minimum instances per node when beta > 0")


def _cmd_train(args) -> int:
    params = _hyperparams_from_args(args)
    ds = load_csv(args.input, label_column=args.label_column)
    if args.cv is not None:
        grid = _parse_grid_spec(args.cv, params)
        cv = evaluate_mod.kfold_cv_grid_search(ds, grid, k=args.folds,
                                               seed=args.seed)
        params = cv.best_params
        print(f"cross-validation picked alpha={params.alpha} nu={params.nu} "
              f"(mean F1 {max(score for _, score in cv.table):.4f} "
              f"over {len(cv.table)} grid points x {args.folds} folds)")
        fit_data = ds.only(TARGET) if ds.labels is not None else ds
    else:
        fit_data = ds
    model = tree_mod.fit(fit_data, params)
    model_io.save_model(model, args.output)
    print(f"trained on {fit_data.n} instances: "
          f"training accuracy {model.training_accuracy:.4f}, "
          f"{tree_mod.leaf_count(model)} target leaves, "
          f"{model.levels_grown} levels")
    print(f"model written to {args.output}")
    return 0


def _cmd_predict(args) -> int:
    model = model_io.load_model(args.model)
    ds = load_csv(args.input, label_column=args.label_column)
    missing = [name for name in model.attribute_names
               if name not in ds.attribute_names]
    if missing:
        raise ValueError(f"input is missing model attribute {missing[0]!r}")
    order = [ds.attribute_names.index(name) for name in model.attribute_names]
    values = ds.values[:, order] if ds.n else np.empty((0, len(order)))
    labels = tree_mod.predict_many(model, values)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(labels) + ("\n" if labels else ""))
    else:
        for label in labels:
            print(label)
    return 0


def _format_rule(rule) -> str:
    return " AND ".join(f"{name} ∈ [{iv.low:g}, {iv.high:g}]"
                        for name, iv in rule.items())


def _cmd_rules(args) -> int:
    model = model_io.load_model(args.model)
    rules = tree_mod.extract_rules(model)
    if args.format == "text":
        for rule in rules:
            print(_format_rule(rule))
    else:
        import json
        payload = [{name: [iv.low, iv.high] for name, iv in rule.items()}
                   for rule in rules]
        print(json.dumps({"rules": payload}, indent=2))
    return 0


def _cmd_evaluate(args) -> int:
    model = model_io.load_model(args.model)
    ds = load_csv(args.input, label_column=args.label_column)
    if ds.labels is None:
        raise ValueError("evaluation input must carry labels")
    bad = set(ds.labels) - {TARGET, OUTLIER}
    if bad:
        raise ValueError(f"labels must be target/outlier, found {sorted(bad)}")
    predicted = tree_mod.predict_many(model, ds.values)
    counts = evaluate_mod.confusion(predicted, ds.labels)
    report = evaluate_mod.metrics(counts)
    print(f"tt={counts.tt} ft={counts.ft} fo={counts.fo} to={counts.to} "
          f"(n={counts.total})")
    print(f"precision={report.precision:.4f} recall={report.recall:.4f} "
          f"f1={report.f1:.4f}")
    return 0


def _cmd_benchmark(args) -> int:
    ds = load_csv(args.input, label_column=args.label_column)
    base = Hyperparams(gamma=args.gamma, alpha=args.alpha, beta=args.beta,
                       nu=args.nu, grid_points=args.grid_points,
                       min_leaf=args.min_leaf)
    grid = _parse_grid_spec(args.grid, base)
    noise_levels = [float(v) / 100 for v in args.noise.split(",") if v.strip()]
    seeds = [int(v) for v in args.seeds.split(",") if v.strip()]
    if not seeds:
        raise ValueError("need at least one seed")
    name = args.dataset_name
    all_rows: list[evaluate_mod.BenchmarkRow] = []
    seed_column: list = []
    for seed in seeds:
        rows = evaluate_mod.run_benchmark(
            ds, args.approach, noise_levels, grid, seed,
            folds=args.folds, dataset_name=name)
        all_rows.extend(rows)
        seed_column.extend([seed] * len(rows))
    if len(seeds) > 1:
        all_rows.extend(_mean_rows(all_rows, seeds))
        seed_column.extend(["mean"] * (len(all_rows) - len(seed_column)))
        text = evaluate_mod.report_to_csv(all_rows,
                                          extra_columns={"seed": seed_column})
    else:
        text = evaluate_mod.report_to_csv(all_rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(all_rows)} rows to {args.out}")
    else:
        print(text, end="")
    return 0


def _mean_rows(rows, seeds):
    """Average the per-seed metric columns for each (variant, noise) pair."""
    groups: dict[tuple, list] = {}
    order = []
    for row in rows:
        key = (row.dataset, row.variant, row.noise_level)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    means = []
    for key in order:
        members = groups[key]
        means.append(evaluate_mod.BenchmarkRow(
            dataset=key[0], variant=key[1], noise_level=key[2],
            precision=float(np.mean([r.precision for r in members])),
            recall=float(np.mean([r.recall for r in members])),
            f1=float(np.mean([r.f1 for r in members])),
            chosen_alpha=float(np.mean([r.chosen_alpha for r in members])),
            chosen_nu=float(np.mean([r.chosen_nu for r in members])),
            train_accuracy=float(np.mean([r.train_accuracy for r in members])),
            target_leaves=round(np.mean([r.target_leaves for r in members])),
            seconds=float(np.sum([r.seconds for r in members])),
        ))
    return means


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdetree",
        description="One-class decision trees with density-derived interval "
                    "splits: train, inspect and evaluate interpretable "
                    "hyper-rectangle models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model on a CSV file")
    p_train.add_argument("--input", required=True, help="training CSV")
    p_train.add_argument("--output", required=True, help="model file to write")
    p_train.add_argument("--label-column", default=None,
                         help="optional label column (labels are ignored for "
                              "fitting unless --cv is used)")
    _add_param_flags(p_train)
    p_train.add_argument("--cv", nargs="?", const="default", default=None,
                         metavar="GRID",
                         help="tune by k-fold CV over a grid spec like "
                              f"'{TABLE_GRID}' ('default' = that grid)")
    p_train.add_argument("--folds", type=int, default=10)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.set_defaults(func=_cmd_train)

    p_pred = sub.add_parser("predict", help="label rows with a trained model")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--input", required=True)
    p_pred.add_argument("--label-column", default=None,
                        help="column to ignore in the input, if present")
    p_pred.add_argument("--out", default=None, help="write labels here "
                        "instead of stdout")
    p_pred.set_defaults(func=_cmd_predict)

    p_rules = sub.add_parser("rules", help="print a model as interval rules")
    p_rules.add_argument("--model", required=True)
    p_rules.add_argument("--format", choices=("text", "json"), default="text")
    p_rules.set_defaults(func=_cmd_rules)

    p_eval = sub.add_parser("evaluate", help="score a model on a labeled CSV")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--input", required=True)
    p_eval.add_argument("--label-column", default="label")
    p_eval.set_defaults(func=_cmd_evaluate)

    p_bench = sub.add_parser("benchmark",
                             help="run the one-class conversion protocol on "
                                  "a multi-class CSV")
    p_bench.add_argument("--input", required=True)
    p_bench.add_argument("--label-column", default="label")
    p_bench.add_argument("--approach", required=True, choices=("A", "B"))
    p_bench.add_argument("--noise", default="2,5,10,15",
                         help="comma-separated noise percentages")
    p_bench.add_argument("--folds", type=int, default=10)
    p_bench.add_argument("--seeds", default="0",
                         help="comma-separated seeds; more than one adds "
                              "per-seed and mean rows (plus a seed column)")
    p_bench.add_argument("--out", default=None, help="report CSV path")
    p_bench.add_argument("--dataset-name", default="dataset")
    p_bench.add_argument("--grid", default="default",
                         help="CV grid spec (see train --cv)")
    _add_param_flags(p_bench)
    p_bench.set_defaults(func=_cmd_benchmark)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
