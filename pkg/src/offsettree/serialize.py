"""Versioned JSON container for trained models.

One flat JSON document per model: a format tag, a version number, the method
name, and a method-specific payload built from the predictor dataclasses.
Serialization is canonical (sorted keys, no whitespace, repr floats), so the
same model always produces the same bytes; infinities in stump thresholds are
encoded as the string "inf" to stay inside strict JSON.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .baselines import AllPairsModel, RegressionModel
from .binary_offset import BinaryOffsetModel
from .costing import IndexTaggedVoteClassifier, MajorityVoteClassifier
from .learners import (ConstantClassifier, ConstantRegressor, LinearClassifier,
                       LinearRegressor, StumpClassifier, TableClassifier,
                       TableRegressor)
from .offset_tree import OffsetTreeModel, build_tree

FORMAT_TAG = "offsettree-model"
FORMAT_VERSION = 1


def _enc_threshold(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return float(value)


def _dec_threshold(value) -> float:
    if value == "inf":
        return math.inf
    if value == "-inf":
        return -math.inf
    return float(value)


def _enc_table(table: dict) -> list:
    return [[list(map(float, key)), entry] for key, entry in sorted(table.items())]


def _dec_table(entries, cast) -> dict:
    return {tuple(float(v) for v in key): cast(entry) for key, entry in entries}


def encode_predictor(p) -> dict:
    """Recursively encode any built-in predictor to plain JSON values."""
    if isinstance(p, ConstantClassifier):
        return {"type": "constant", "label": int(p.label)}
    if isinstance(p, LinearClassifier):
        return {"type": "linear", "w": [float(v) for v in p.w], "b": float(p.b)}
    if isinstance(p, StumpClassifier):
        return {"type": "stump", "feature": int(p.feature),
                "threshold": _enc_threshold(p.threshold), "polarity": int(p.polarity)}
    if isinstance(p, TableClassifier):
        return {"type": "table", "default": int(p.default),
                "entries": _enc_table({k: int(v) for k, v in p.table.items()})}
    if isinstance(p, MajorityVoteClassifier):
        return {"type": "vote", "members": [encode_predictor(m) for m in p.members]}
    if isinstance(p, IndexTaggedVoteClassifier):
        return {"type": "tagged-vote", "base": encode_predictor(p.base),
                "draws": int(p.draws)}
    if isinstance(p, ConstantRegressor):
        return {"type": "constant-regressor", "value": float(p.value)}
    if isinstance(p, LinearRegressor):
        return {"type": "linear-regressor", "w": [float(v) for v in p.w],
                "b": float(p.b)}
    if isinstance(p, TableRegressor):
        return {"type": "table-regressor", "default": float(p.default),
                "entries": _enc_table({k: float(v) for k, v in p.table.items()})}
    raise ValueError(f"cannot serialize predictor of type {type(p).__name__}")


def decode_predictor(obj: dict):
    kind = obj.get("type")
    if kind == "constant":
        return ConstantClassifier(int(obj["label"]))
    if kind == "linear":
        return LinearClassifier(np.array(obj["w"], dtype=float), float(obj["b"]))
    if kind == "stump":
        return StumpClassifier(int(obj["feature"]), _dec_threshold(obj["threshold"]),
                               int(obj["polarity"]))
    if kind == "table":
        return TableClassifier(_dec_table(obj["entries"], int), int(obj["default"]))
    if kind == "vote":
        return MajorityVoteClassifier(tuple(decode_predictor(m) for m in obj["members"]))
    if kind == "tagged-vote":
        return IndexTaggedVoteClassifier(decode_predictor(obj["base"]), int(obj["draws"]))
    if kind == "constant-regressor":
        return ConstantRegressor(float(obj["value"]))
    if kind == "linear-regressor":
        return LinearRegressor(np.array(obj["w"], dtype=float), float(obj["b"]))
    if kind == "table-regressor":
        return TableRegressor(_dec_table(obj["entries"], float), float(obj["default"]))
    raise ValueError(f"unknown predictor type {kind!r}")


def _encode_model(model) -> tuple[str, dict]:
    if isinstance(model, OffsetTreeModel):
        payload = {"k": model.tree.k,
                   "leaf_order": [int(a) for a in model.tree.leaf_order],
                   "n_features": model.n_features}
        if model.shared_classifier is not None:
            payload["shared"] = encode_predictor(model.shared_classifier)
        else:
            payload["nodes"] = {str(i): encode_predictor(c)
                                for i, c in model.node_classifiers.items()}
        return "offset-tree", payload
    if isinstance(model, BinaryOffsetModel):
        return "binary-offset", {"offset": float(model.offset),
                                 "n_features": model.n_features,
                                 "classifier": encode_predictor(model.classifier)}
    if isinstance(model, RegressionModel):
        return "regression", {"k": model.k, "mode": model.mode,
                              "n_features": model.n_features,
                              "regressors": [encode_predictor(r)
                                             for r in model.regressors]}
    if isinstance(model, AllPairsModel):
        pairs = [[i, j, encode_predictor(c)]
                 for (i, j), c in sorted(model.pair_classifiers.items())]
        return "iwc", {"k": model.k, "n_features": model.n_features, "pairs": pairs}
    raise ValueError(f"cannot serialize model of type {type(model).__name__}")


def model_to_json(model) -> str:
    method, payload = _encode_model(model)
    doc = {"format": FORMAT_TAG, "version": FORMAT_VERSION,
           "method": method, "payload": payload}
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def model_from_json(text: str):
    doc = json.loads(text)
    if doc.get("format") != FORMAT_TAG:
        raise ValueError(f"not a model container (format tag {doc.get('format')!r})")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported container version {doc.get('version')!r}")
    method = doc.get("method")
    payload = doc.get("payload")
    if payload is None:
        raise ValueError("model container has no payload")
    if method == "offset-tree":
        tree = build_tree(payload["k"], payload["leaf_order"])
        if "shared" in payload:
            return OffsetTreeModel(tree, None, decode_predictor(payload["shared"]),
                                   payload["n_features"])
        nodes = {int(i): decode_predictor(c) for i, c in payload["nodes"].items()}
        return OffsetTreeModel(tree, nodes, None, payload["n_features"])
    if method == "binary-offset":
        return BinaryOffsetModel(decode_predictor(payload["classifier"]),
                                 float(payload["offset"]), payload["n_features"])
    if method == "regression":
        return RegressionModel(payload["k"], payload["mode"],
                               tuple(decode_predictor(r) for r in payload["regressors"]),
                               payload["n_features"])
    if method == "iwc":
        pairs = {(int(i), int(j)): decode_predictor(c) for i, j, c in payload["pairs"]}
        return AllPairsModel(payload["k"], pairs, payload["n_features"])
    raise ValueError(f"unknown method {method!r} in model container")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model) + "\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(fh.read())
