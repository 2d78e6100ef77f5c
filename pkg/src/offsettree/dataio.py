"""Text formats for multiclass datasets and partial-label (bandit) logs.

Both formats are whitespace-delimited with a single header line holding the
feature dimension d and the action count k.  Multiclass rows are d feature
values followed by an integer class label in 1..k.  Log rows are d feature
values, the chosen action, the observed reward, and then either the token
"uniform" or k propensity values.  Floats are written with repr so a
round-trip is byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PartialLabelExample


class DataFormatError(ValueError):
    """A malformed dataset or log file; message carries the 1-based line number."""

    def __init__(self, line: int, message: str, path=None):
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True, eq=False)
class MulticlassDataset:
    """Fully labeled multiclass data: features, 1-based labels, class count."""

    xs: np.ndarray
    labels: np.ndarray
    k: int

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        labels = np.array(self.labels, dtype=int)
        if xs.ndim != 2:
            raise ValueError(f"features must be a 2-D array, got shape {xs.shape}")
        if labels.shape != (xs.shape[0],):
            raise ValueError("need exactly one label per example")
        if xs.shape[0] == 0:
            raise ValueError("dataset has no examples")
        if not np.all(np.isfinite(xs)):
            raise ValueError("features contain NaN or Inf")
        if self.k < 2:
            raise ValueError(f"need at least 2 classes, got k={self.k}")
        if labels.min() < 1 or labels.max() > self.k:
            raise ValueError(f"labels must lie in 1..{self.k}")
        xs.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def d(self) -> int:
        return self.xs.shape[1]


@dataclass(frozen=True, eq=False)
class BanditLog:
    """A parsed partial-label log plus its declared dimensions."""

    examples: tuple[PartialLabelExample, ...]
    d: int
    k: int


def _parse_header(lines: list[str], path) -> tuple[int, int]:
    if not lines:
        raise DataFormatError(1, "empty file (expected a 'd k' header)", path)
    parts = lines[0].split()
    if len(parts) != 2:
        raise DataFormatError(1, f"header must be 'd k', got {lines[0]!r}", path)
    try:
        d, k = int(parts[0]), int(parts[1])
    except ValueError:
        raise DataFormatError(1, f"header must hold two integers, got {lines[0]!r}", path)
    if d < 1 or k < 2:
        raise DataFormatError(1, f"need d >= 1 and k >= 2, got d={d} k={k}", path)
    return d, k


def _data_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            out.append((number, line))
    return out


def read_multiclass(path) -> MulticlassDataset:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = _data_lines(text)
    d, k = _parse_header([line for _, line in lines[:1]], path)
    xs, labels = [], []
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) != d + 1:
            raise DataFormatError(number, f"expected {d} features + label, got {len(parts)} columns", path)
        try:
            xs.append([float(v) for v in parts[:d]])
            label = int(parts[d])
        except ValueError as err:
            raise DataFormatError(number, str(err), path)
        if not 1 <= label <= k:
            raise DataFormatError(number, f"label {label} outside 1..{k}", path)
        labels.append(label)
    if not xs:
        raise DataFormatError(len(text.splitlines()) + 1, "no data rows", path)
    return MulticlassDataset(np.array(xs), np.array(labels), k)


def write_multiclass(path, dataset: MulticlassDataset) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{dataset.d} {dataset.k}\n")
        for x, label in zip(dataset.xs, dataset.labels):
            cols = [repr(float(v)) for v in x] + [str(int(label))]
            fh.write(" ".join(cols) + "\n")


def read_bandit_log(path) -> BanditLog:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = _data_lines(text)
    d, k = _parse_header([line for _, line in lines[:1]], path)
    examples = []
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) not in (d + 3, d + 2 + k):
            raise DataFormatError(
                number,
                f"expected {d} features, action, reward, then 'uniform' or {k} propensities; "
                f"got {len(parts)} columns", path)
        try:
            x = [float(v) for v in parts[:d]]
            action = int(parts[d])
            reward = float(parts[d + 1])
            tail = parts[d + 2:]
            if tail == ["uniform"]:
                propensities = None
            elif len(tail) == k:
                propensities = [float(v) for v in tail]
            else:
                raise ValueError(f"propensity columns must be 'uniform' or {k} values")
            examples.append(PartialLabelExample(x, action, reward, k, propensities))
        except ValueError as err:
            raise DataFormatError(number, str(err), path)
    if not examples:
        raise DataFormatError(len(text.splitlines()) + 1, "no data rows", path)
    return BanditLog(tuple(examples), d, k)


def write_bandit_log(path, examples, d: int | None = None) -> None:
    examples = list(examples)
    if not examples:
        raise ValueError("refusing to write an empty log")
    k = examples[0].k
    if d is None:
        d = len(examples[0].x)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{d} {k}\n")
        for e in examples:
            if e.k != k or len(e.x) != d:
                raise ValueError("all examples must share d and k")
            cols = [repr(float(v)) for v in e.x]
            cols.append(str(e.action))
            cols.append(repr(float(e.reward)))
            if e.propensities is None:
                cols.append("uniform")
            else:
                cols.extend(repr(float(p)) for p in e.propensities)
            fh.write(" ".join(cols) + "\n")
