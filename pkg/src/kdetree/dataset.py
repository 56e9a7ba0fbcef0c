"""Numeric datasets: CSV ingestion, synthetic generation and label protocols.

A :class:`Dataset` is an immutable ``n x d`` matrix of finite reals with named
attributes and an optional per-row label. One-class labels use the canonical
strings :data:`TARGET` and :data:`OUTLIER`; multi-class sources keep their raw
class identifiers until converted by :func:`one_vs_rest`.

All random operations take an explicit integer seed and are pure functions of
their inputs: the same seed always reproduces the same result.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

TARGET = "target"
OUTLIER = "outlier"


def _round_half_up(x: float) -> int:
    # round() would do banker's rounding; sample counts use half-up
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class Dataset:
    """Immutable instance matrix with attribute names and optional labels.

    Attributes
    ----------
    values : np.ndarray
        Array of shape ``(n, d)``; every entry must be finite.
    attribute_names : tuple of str
        ``d`` unique column names.
    labels : tuple of str or None
        Per-row tag, length ``n`` when present. Either the one-class
        vocabulary (``"target"``/``"outlier"``) or raw class identifiers.
    """

    values: np.ndarray
    attribute_names: tuple[str, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"values must be 2-dimensional, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("dataset values must all be finite (no NaN/Inf)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        names = tuple(self.attribute_names)
        if len(names) != values.shape[1]:
            raise ValueError(
                f"{len(names)} attribute names for {values.shape[1]} columns"
            )
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")
        object.__setattr__(self, "attribute_names", names)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != values.shape[0]:
                raise ValueError(
                    f"{len(labels)} labels for {values.shape[0]} instances"
                )
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def subset(self, indices) -> "Dataset":
        """Dataset restricted to the given row indices (order preserved)."""
        idx = np.asarray(indices, dtype=int)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[i] for i in idx)
        return Dataset(self.values[idx], self.attribute_names, labels)

    def with_labels(self, labels) -> "Dataset":
        return Dataset(self.values, self.attribute_names, tuple(labels))

    def only(self, label: str) -> "Dataset":
        """Rows carrying exactly the given label (requires labels)."""
        if self.labels is None:
            raise ValueError("dataset has no labels")
        idx = [i for i, lab in enumerate(self.labels) if lab == label]
        return self.subset(idx)


def _canonical_label(raw: str) -> str:
    low = raw.strip().lower()
    if low in (TARGET, OUTLIER):
        return low
    return raw.strip()


def load_csv(path, label_column: str | None = None) -> Dataset:
    """Read a dataset from a UTF-8, comma-separated file with a header row.

    Parameters
    ----------
    path : str or Path
        File to read.
    label_column : str, optional
        Name of the column holding per-row labels. One-class labels
        (``target``/``outlier``, case-insensitive) are canonicalized;
        any other string is kept verbatim as a class identifier.

    Raises
    ------
    FileNotFoundError
        If `path` does not exist.
    ValueError
        On duplicate header names, a missing label column, or any cell
        that does not parse as a finite decimal number (the error names
        the offending 1-based data row and the column).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path} is empty (missing header row)") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dupes = sorted({h for h in header if header.count(h) > 1})
            raise ValueError(f"duplicate header names: {', '.join(dupes)}")
        if label_column is not None and label_column not in header:
            raise ValueError(f"label column {label_column!r} not in header")
        label_idx = header.index(label_column) if label_column is not None else None
        value_cols = [i for i in range(len(header)) if i != label_idx]
        names = tuple(header[i] for i in value_cols)

        rows: list[list[float]] = []
        labels: list[str] = []
        for row_no, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue  # tolerate blank lines
            if len(row) != len(header):
                raise ValueError(
                    f"row {row_no}: expected {len(header)} cells, got {len(row)}"
                )
            parsed = []
            for i in value_cols:
                cell = row[i].strip()
                try:
                    value = float(cell)
                except ValueError:
                    raise ValueError(
                        f"row {row_no}, column {header[i]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
                if not math.isfinite(value):
                    raise ValueError(
                        f"row {row_no}, column {header[i]!r}: non-finite value {cell!r}"
                    )
                parsed.append(value)
            rows.append(parsed)
            if label_idx is not None:
                labels.append(_canonical_label(row[label_idx]))

    values = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return Dataset(values, names, tuple(labels) if label_idx is not None else None)


def write_csv(ds: Dataset, path, label_column: str = "label") -> None:
    """Write a dataset back to CSV with full round-trip float precision."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = list(ds.attribute_names)
        if ds.labels is not None:
            header.append(label_column)
        writer.writerow(header)
        for i in range(ds.n):
            row = [repr(float(v)) for v in ds.values[i]]
            if ds.labels is not None:
                row.append(ds.labels[i])
            writer.writerow(row)


def train_test_split(ds: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Uniformly random disjoint partition into train and test parts.

    The training part receives ``floor(train_fraction * n)`` rows; both
    parts preserve the original relative row order.
    """
    if ds.n == 0:
        raise ValueError("cannot split an empty dataset")
    if not 0 < train_fraction <= 1:
        raise ValueError(f"train_fraction must be in (0, 1], got {train_fraction}")
    rng = np.random.default_rng(seed)
    n_train = int(math.floor(train_fraction * ds.n))
    perm = rng.permutation(ds.n)
    train_idx = np.sort(perm[:n_train])
    test_idx = np.sort(perm[n_train:])
    return ds.subset(train_idx), ds.subset(test_idx)


def inject_uniform_outliers(ds: Dataset, fraction: float, seed: int) -> Dataset:
    """Append uniform noise rows labeled outlier; existing rows become targets.

    ``round(fraction * n)`` rows are appended (half-up rounding); each
    coordinate is drawn uniformly and independently from the per-attribute
    ``[min, max]`` range of the existing data.
    """
    if ds.n == 0:
        raise ValueError("cannot inject outliers into an empty dataset")
    if fraction < 0:
        raise ValueError(f"fraction must be >= 0, got {fraction}")
    rng = np.random.default_rng(seed)
    m = _round_half_up(fraction * ds.n)
    lo = ds.values.min(axis=0)
    hi = ds.values.max(axis=0)
    noise = rng.uniform(lo, hi, size=(m, ds.d)) if m > 0 else np.empty((0, ds.d))
    values = np.vstack([ds.values, noise])
    labels = (TARGET,) * ds.n + (OUTLIER,) * m
    return Dataset(values, ds.attribute_names, labels)


def one_vs_rest(ds: Dataset, target_class: str, outlier_fraction: float, seed: int) -> Dataset:
    """One-class dataset from a multi-class source.

    All rows of `target_class` become targets; ``round(outlier_fraction *
    n_target)`` rows are sampled without replacement from the remaining
    classes and labeled outlier. No other rows are included.
    """
    if ds.labels is None:
        raise ValueError("one_vs_rest requires class labels")
    if outlier_fraction < 0:
        raise ValueError(f"outlier_fraction must be >= 0, got {outlier_fraction}")
    target_idx = [i for i, lab in enumerate(ds.labels) if lab == target_class]
    if not target_idx:
        raise ValueError(f"class {target_class!r} not present in labels")
    pool = [i for i, lab in enumerate(ds.labels) if lab != target_class]
    m = _round_half_up(outlier_fraction * len(target_idx))
    if m > len(pool):
        raise ValueError(
            f"requested {m} outliers but only {len(pool)} non-{target_class!r} "
            "instances are available"
        )
    rng = np.random.default_rng(seed)
    chosen = sorted(rng.choice(len(pool), size=m, replace=False)) if m > 0 else []
    outlier_idx = [pool[i] for i in chosen]
    values = np.vstack([ds.values[target_idx], ds.values[outlier_idx]])
    labels = (TARGET,) * len(target_idx) + (OUTLIER,) * m
    return Dataset(values, ds.attribute_names, labels)


def gaussian_blobs(centers, stds, n: int, seed: int,
                   attribute_names: tuple[str, ...] | None = None) -> Dataset:
    """Sample `n` target rows from isotropic Gaussian blobs.

    Rows are assigned to blobs round-robin (row ``i`` belongs to blob
    ``i % len(centers)``), so blob sizes are deterministic.
    """
    centers = np.asarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[0] == 0:
        raise ValueError("centers must be a nonempty list of d-vectors")
    stds = np.asarray(stds, dtype=float)
    if stds.shape != (centers.shape[0],):
        raise ValueError("stds length must match the number of centers")
    if np.any(stds <= 0):
        raise ValueError("stds must be positive")
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    d = centers.shape[1]
    rng = np.random.default_rng(seed)
    blob = np.arange(n) % centers.shape[0]
    values = centers[blob] + stds[blob, None] * rng.standard_normal((n, d))
    if attribute_names is None:
        attribute_names = tuple(f"a{j + 1}" for j in range(d))
    return Dataset(values, attribute_names, (TARGET,) * n)


def demo_dataset_path() -> Path:
    """Path of the bundled 3-class, 4-attribute demo CSV (150 rows)."""
    return Path(str(resources.files("kdetree") / "data" / "demo_multiclass.csv"))
