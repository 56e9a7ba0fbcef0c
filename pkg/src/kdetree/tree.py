"""One-class decision tree induction over density-derived intervals.

The tree grows breadth-first. At each level every leaf scores its eligible
attributes with :func:`kdetree.split.propose_split`, applies the candidate
with the lowest impurity proxy (ties go to the lower attribute index) and
creates one child per surviving target interval; training instances covered
by no interval fall into the implicit "else" branch and are rejected.

Growth stops when a level leaves the training accuracy unchanged without
raising new target leaves, when no leaf has an applicable candidate left,
or when the accuracy drops below ``1 - nu``; in the last case the entire
offending level is rolled back before stopping.

An attribute is eligible at a node unless its values are all equal, it was
already used on this branch without an intervening multi-child split by
another attribute, or its bandwidth is zero or finer than the data
granularity (the smallest gap between distinct consecutive values). A
multi-child split therefore unblocks the other attributes below it but
keeps its own attribute blocked until the branch multiplies again;
single-child refinements accumulate.

Prediction walks the branch intervals by closed containment, after checking
the instance against the root bounding box; reaching a leaf means target,
falling off any node means outlier. Every target leaf therefore corresponds
to one axis-aligned hyper-rectangle, and the fitted model can be rewritten
as a list of interval-conjunction rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kde
from .dataset import Dataset, OUTLIER, TARGET
from .split import Interval, SplitParams, propose_split


@dataclass(frozen=True)
class Hyperparams:
    """Tree-level knobs; see the splitting pipeline for gamma/alpha/beta.

    ``nu`` is the tolerated fraction of rejected training instances.
    """

    gamma: float = 0.05
    alpha: float = 0.5
    beta: float = 0.02
    nu: float = 0.1
    grid_points: int = 512
    min_leaf: int = 5

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0 <= self.beta < 1:
            raise ValueError(f"beta must be in [0, 1), got {self.beta}")
        if not 0 <= self.nu < 1:
            raise ValueError(f"nu must be in [0, 1), got {self.nu}")
        if self.grid_points < 16:
            raise ValueError(f"grid_points must be >= 16, got {self.grid_points}")
        if self.min_leaf < 1:
            raise ValueError(f"min_leaf must be >= 1, got {self.min_leaf}")


@dataclass
class Node:
    """Tree node: a leaf, or an internal node with interval branches.

    ``bounds`` is the node's hyper-rectangle (one closed interval per
    attribute); every child's bounds equal the parent's with the split
    attribute narrowed to the branch interval.
    """

    bounds: tuple[Interval, ...]
    count: int
    attribute: int | None = None
    branches: list[tuple[Interval, "Node"]] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.attribute is None


@dataclass
class OneClassTree:
    """Fitted model: root node, hyperparameters and training bookkeeping.

    ``accuracy_history`` records the training accuracy after each kept
    level, starting at 1.0 for the bare root.
    """

    root: Node
    attribute_names: tuple[str, ...]
    params: Hyperparams
    training_accuracy: float
    levels_grown: int
    accuracy_history: tuple[float, ...]

    @property
    def d(self) -> int:
        return len(self.attribute_names)


Rule = dict[str, Interval]


def attribute_eligible(attribute: int, values, history: set[int]) -> bool:
    """Whether an attribute may still divide a node.

    Ineligible when all values coincide, when the attribute is in the
    branch history (see the module docstring for how history accumulates
    and resets), or when the bandwidth is zero or strictly finer than the
    smallest gap between consecutive distinct values.
    """
    v = np.asarray(values, dtype=float)
    distinct = np.unique(v)
    if distinct.size <= 1:
        return False
    if attribute in history:
        return False
    h = kde.silverman_bandwidth(v)
    if h == 0.0 or h < float(np.diff(distinct).min()):
        return False
    return True


@dataclass
class _GrowingLeaf:
    node: Node
    indices: np.ndarray
    history: set[int]
    exhausted: bool = False


def fit(train: Dataset, params: Hyperparams) -> OneClassTree:
    """Grow a one-class tree on the training matrix (labels are ignored)."""
    if train.n == 0:
        raise ValueError("cannot fit on an empty dataset")
    if train.d == 0:
        raise ValueError("cannot fit on a dataset with no attributes")
    x = train.values
    n, d = x.shape
    sp = SplitParams(gamma=params.gamma, alpha=params.alpha, beta=params.beta,
                     n_root=n, min_leaf=params.min_leaf,
                     grid_points=params.grid_points)
    root = Node(
        bounds=tuple(Interval(float(x[:, j].min()), float(x[:, j].max()))
                     for j in range(d)),
        count=n,
    )
    leaves = [_GrowingLeaf(root, np.arange(n), set())]
    accepted = n
    history = [1.0]
    levels = 0

    while True:
        plans = []
        for leaf in leaves:
            if leaf.exhausted:
                continue
            best = None
            for j in range(d):
                vals = x[leaf.indices, j]
                if not attribute_eligible(j, vals, leaf.history):
                    continue
                cand = propose_split(vals, j, sp, node_range=leaf.node.bounds[j])
                if cand is None:
                    continue
                if (len(cand.target_intervals) == 1
                        and cand.target_intervals[0] == leaf.node.bounds[j]):
                    continue  # would recreate this node unchanged
                if best is None or cand.proxy < best.proxy:
                    best = cand
            if best is None:
                leaf.exhausted = True  # deterministic: stays fruitless forever
            else:
                plans.append((leaf, best))
        if not plans:
            break

        new_leaves = [leaf for leaf in leaves if leaf.exhausted
                      or all(leaf is not p[0] for p in plans)]
        split_nodes = []
        new_accepted = accepted
        for leaf, cand in plans:
            j = cand.attribute
            vals = x[leaf.indices, j]
            children = []
            kept = 0
            multi = len(cand.target_intervals) >= 2
            for iv in cand.target_intervals:
                child_idx = leaf.indices[(vals >= iv.low) & (vals <= iv.high)]
                bounds = list(leaf.node.bounds)
                bounds[j] = iv
                child = Node(bounds=tuple(bounds), count=len(child_idx))
                children.append((iv, child))
                child_history = {j} if multi else leaf.history | {j}
                new_leaves.append(_GrowingLeaf(child, child_idx, child_history))
                kept += len(child_idx)
            leaf.node.attribute = j
            leaf.node.branches = children
            split_nodes.append(leaf.node)
            new_accepted -= leaf.node.count - kept

        if new_accepted / n < 1 - params.nu:
            for node in split_nodes:  # level breached the rejection budget
                node.attribute = None
                node.branches = []
            break

        stable = new_accepted == accepted and len(new_leaves) <= len(leaves)
        leaves = new_leaves
        accepted = new_accepted
        levels += 1
        history.append(accepted / n)
        if stable:
            break

    return OneClassTree(
        root=root,
        attribute_names=train.attribute_names,
        params=params,
        training_accuracy=accepted / n,
        levels_grown=levels,
        accuracy_history=tuple(history),
    )


def predict(tree: OneClassTree, instance) -> str:
    """Label one instance: target when it lands in a target leaf's box."""
    row = np.asarray(instance, dtype=float)
    if row.shape != (tree.d,):
        raise ValueError(f"expected {tree.d} attribute values, got shape {row.shape}")
    if not np.all(np.isfinite(row)):
        raise ValueError("instance contains non-finite values")
    for j, iv in enumerate(tree.root.bounds):
        if not iv.contains(row[j]):
            return OUTLIER
    node = tree.root
    while not node.is_leaf:
        value = row[node.attribute]
        for iv, child in node.branches:
            if iv.contains(value):
                node = child
                break
        else:
            return OUTLIER
    return TARGET


def predict_many(tree: OneClassTree, values) -> list[str]:
    rows = np.asarray(values, dtype=float)
    if rows.ndim == 1:
        rows = rows.reshape(0, tree.d) if rows.size == 0 else rows.reshape(1, -1)
    return [predict(tree, row) for row in rows]


def training_accuracy(tree: OneClassTree, train: Dataset) -> float:
    """Fraction of instances the tree accepts (recomputes the stored value)."""
    if train.n == 0:
        raise ValueError("cannot score an empty dataset")
    hits = sum(1 for lab in predict_many(tree, train.values) if lab == TARGET)
    return hits / train.n


def extract_rules(tree: OneClassTree) -> list[Rule]:
    """One interval-conjunction rule per target leaf, in path order.

    A root-only tree yields a single rule spanning the full training
    bounding box; deeper trees list exactly the attributes tested on each
    leaf's path (an attribute re-tested on the path keeps its narrowest
    interval).
    """
    names = tree.attribute_names
    rules: list[Rule] = []

    def walk(node: Node, conditions: Rule) -> None:
        if node.is_leaf:
            if conditions:
                rules.append(dict(conditions))
            else:
                rules.append({name: iv for name, iv in zip(names, node.bounds)})
            return
        for iv, child in node.branches:
            child_conditions = dict(conditions)
            child_conditions[names[node.attribute]] = iv
            walk(child, child_conditions)

    walk(tree.root, {})
    return rules


def leaf_count(tree: OneClassTree) -> int:
    def count(node: Node) -> int:
        if node.is_leaf:
            return 1
        return sum(count(child) for _, child in node.branches)

    return count(tree.root)


def ensemble_predict(trees, values, attribute_names) -> str:
    """Conjunctive ensemble: target only when every member says target.

    Each member tree picks its own attributes from `values` by name; a
    missing attribute is an error naming it.
    """
    trees = list(trees)
    if not trees:
        raise ValueError("ensemble is empty")
    row = np.asarray(values, dtype=float)
    position = {name: i for i, name in enumerate(attribute_names)}
    for member in trees:
        try:
            idx = [position[name] for name in member.attribute_names]
        except KeyError as missing:
            raise ValueError(f"instance is missing attribute {missing.args[0]!r}") from None
        if predict(member, row[idx]) == OUTLIER:
            return OUTLIER
    return TARGET
