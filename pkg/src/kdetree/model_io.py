"""Versioned JSON serialization of fitted trees.

The format is a human-inspectable document; floats round-trip exactly
(shortest-repr encoding), so a reloaded model predicts identically to the
original.
"""

from __future__ import annotations

import json
from pathlib import Path

from .split import Interval
from .tree import Hyperparams, Node, OneClassTree

FORMAT_VERSION = 1


def _node_to_dict(node: Node) -> dict:
    record = {
        "kind": "leaf" if node.is_leaf else "internal",
        "bounds": [[iv.low, iv.high] for iv in node.bounds],
        "count": node.count,
    }
    if not node.is_leaf:
        record["attribute"] = node.attribute
        record["branches"] = [
            [iv.low, iv.high, _node_to_dict(child)] for iv, child in node.branches
        ]
    return record


def _node_from_dict(record: dict) -> Node:
    node = Node(
        bounds=tuple(Interval(low, high) for low, high in record["bounds"]),
        count=record["count"],
    )
    if record["kind"] == "internal":
        node.attribute = record["attribute"]
        node.branches = [
            (Interval(low, high), _node_from_dict(child))
            for low, high, child in record["branches"]
        ]
    elif record["kind"] != "leaf":
        raise ValueError(f"unknown node kind {record['kind']!r}")
    return node


def tree_to_dict(tree: OneClassTree) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "params": {
            "gamma": tree.params.gamma,
            "alpha": tree.params.alpha,
            "beta": tree.params.beta,
            "nu": tree.params.nu,
            "grid_points": tree.params.grid_points,
            "min_leaf": tree.params.min_leaf,
        },
        "attribute_names": list(tree.attribute_names),
        "training_accuracy": tree.training_accuracy,
        "levels_grown": tree.levels_grown,
        "accuracy_history": list(tree.accuracy_history),
        "tree": _node_to_dict(tree.root),
    }


def tree_from_dict(document: dict) -> OneClassTree:
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format version {version!r} "
            f"(this build reads version {FORMAT_VERSION})"
        )
    return OneClassTree(
        root=_node_from_dict(document["tree"]),
        attribute_names=tuple(document["attribute_names"]),
        params=Hyperparams(**document["params"]),
        training_accuracy=document["training_accuracy"],
        levels_grown=document["levels_grown"],
        accuracy_history=tuple(document["accuracy_history"]),
    )


def dumps(tree: OneClassTree) -> str:
    return json.dumps(tree_to_dict(tree), indent=2)


def save_model(tree: OneClassTree, path) -> None:
    Path(path).write_text(dumps(tree) + "\n", encoding="utf-8")


def load_model(path) -> OneClassTree:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such model file: {path}")
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not a valid model file: {exc}") from None
    return tree_from_dict(document)
