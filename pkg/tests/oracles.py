"""Independent brute-force oracles and invariant checkers.

Everything here is deliberately written from the definitions, without
touching the library's implementations, so the tests exercise two
independent routes to the same numbers.
"""

import math

import numpy as np

from kdetree.dataset import TARGET


def oracle_sigma(xs) -> float:
    """Sample standard deviation, divisor n-1, defined as 0 for n=1."""
    xs = list(xs)
    n = len(xs)
    if n == 1 or min(xs) == max(xs):
        return 0.0  # exactly zero; the float mean would leave residue
    mean = sum(xs) / n
    return math.sqrt(sum((x - mean) ** 2 for x in xs) / (n - 1))


def oracle_quantile(sorted_xs, p: float) -> float:
    """Linear interpolation at fractional position p * (n - 1)."""
    n = len(sorted_xs)
    pos = p * (n - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return sorted_xs[lo]
    return sorted_xs[lo] + (pos - lo) * (sorted_xs[hi] - sorted_xs[lo])


def oracle_bandwidth(xs) -> float:
    """Brute-force rule-of-thumb bandwidth from the stated conventions."""
    xs_sorted = sorted(xs)
    n = len(xs_sorted)
    sigma = oracle_sigma(xs_sorted)
    iqr = oracle_quantile(xs_sorted, 0.75) - oracle_quantile(xs_sorted, 0.25)
    if iqr != 0:
        return 0.9 * min(sigma, iqr / 1.34) * n ** (-1 / 5)
    return 0.9 * sigma * n ** (-1 / 5)


def oracle_proxy(counts, intervals, range_low, range_high, n_parent) -> float:
    """Direct transliteration of the virtual-outlier impurity score."""
    total = 0.0
    for n_i, (left, right) in zip(counts, intervals):
        n_prime = n_parent * (right - left) / (range_high - range_low)
        if n_i + n_prime == 0:
            continue
        total += n_i * n_prime / (n_i + n_prime)
    return total


def rules_predict_target(rules, root_bounds, row) -> bool:
    """Rule-set semantics: inside the root box and inside some rule's box."""
    for j, (low, high) in enumerate(root_bounds):
        if not low <= row[j] <= high:
            return False
    for rule in rules:
        if all(iv.low <= row[j] <= iv.high for j, iv in rule.items()):
            return True
    return False


def check_structure(tree_model, train_values, params) -> None:
    """Assert the structural invariants of a fitted tree against its data.

    Checks sibling-interval disjointness, child-bounds nesting, shrink
    tightness (branch interval endpoints are values of the node's member
    data), leaf support under a positive beta, the training-accuracy floor
    and monotone rejection across levels.
    """
    x = train_values
    n_root = x.shape[0]
    floor = 0
    if params.beta > 0:
        floor = max(math.ceil(params.beta * n_root), params.min_leaf)

    def walk(node, idx):
        assert node.count == len(idx), "node count disagrees with membership"
        if node.is_leaf:
            if floor and len(idx) < floor:
                raise AssertionError(
                    f"leaf support {len(idx)} below floor {floor}")
            return
        j = node.attribute
        vals = x[idx, j]
        prev_high = -math.inf
        for iv, child in node.branches:
            assert iv.low > prev_high, "sibling intervals overlap or touch"
            prev_high = iv.high
            members = idx[(vals >= iv.low) & (vals <= iv.high)]
            assert np.any(vals == iv.low) and np.any(vals == iv.high), \
                "interval endpoints are not training values (shrink tightness)"
            parent_iv = node.bounds[j]
            assert parent_iv.low <= iv.low and iv.high <= parent_iv.high, \
                "branch interval escapes the parent bounds"
            for k, (piv, civ) in enumerate(zip(node.bounds, child.bounds)):
                if k == j:
                    assert civ == iv, "child bounds not narrowed to the branch"
                else:
                    assert civ == piv, "child bounds differ off the split axis"
            walk(child, members)

    walk(tree_model.root, np.arange(n_root))

    root_only = tree_model.root.is_leaf
    assert root_only or tree_model.training_accuracy >= 1 - params.nu, \
        "training accuracy below the 1 - nu floor on a grown tree"
    hist = tree_model.accuracy_history
    assert all(a >= b for a, b in zip(hist, hist[1:])), \
        "training accuracy increased across levels"


def predicted_target_fraction(tree_module, model, values) -> float:
    labels = tree_module.predict_many(model, values)
    return sum(1 for lab in labels if lab == TARGET) / len(labels)
