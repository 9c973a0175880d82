"""Alphabet and labeled-trace dataset handling.

Traces are tuples of dense integer symbol ids over a closed-world
:class:`Alphabet` built from the data in first-appearance order.  Class
names are handled the same way, so every downstream artifact (prefix
trees, programs, learned models) is deterministic given the same input
file.
"""
from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field

from .errors import DataError, UnknownSymbolError

Trace = tuple  # tuple of int symbol ids


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of symbol strings with a dense id for each."""

    symbols: tuple
    index: dict = field(repr=False, compare=False)

    @classmethod
    def build(cls, symbol_iter) -> "Alphabet":
        symbols = []
        index = {}
        for s in symbol_iter:
            if s not in index:
                index[s] = len(symbols)
                symbols.append(s)
        return cls(tuple(symbols), index)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol):
        return symbol in self.index

    def encode(self, symbols) -> Trace:
        """Map symbol strings to ids, failing loudly on unseen symbols."""
        ids = []
        for s in symbols:
            if s not in self.index:
                raise UnknownSymbolError(s)
            ids.append(self.index[s])
        return tuple(ids)

    def decode(self, trace: Trace) -> tuple:
        return tuple(self.symbols[i] for i in trace)


@dataclass(frozen=True)
class LabeledDataset:
    """Encoded traces with class-id labels over a shared alphabet."""

    alphabet: Alphabet
    items: tuple  # of (Trace, label_id)
    classes: tuple  # of class name strings

    def __len__(self):
        return len(self.items)

    def class_id(self, name: str) -> int:
        try:
            return self.classes.index(name)
        except ValueError:
            raise DataError(f"unknown class: {name!r}") from None

    def class_counts(self) -> list:
        counts = [0] * len(self.classes)
        for _, label in self.items:
            counts[label] += 1
        return counts


@dataclass(frozen=True)
class MultiLabelDataset:
    """Traces carrying a set of class labels each (no single-goal assumption)."""

    alphabet: Alphabet
    items: tuple  # of (Trace, frozenset of label ids)
    classes: tuple


def _parse_jsonl(path, multi_label):
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or "trace" not in obj:
                raise DataError(f"{path}:{lineno}: record must be an object with a 'trace' field")
            trace = obj["trace"]
            if not isinstance(trace, list) or not all(isinstance(s, str) for s in trace):
                raise DataError(f"{path}:{lineno}: 'trace' must be an array of strings")
            if multi_label:
                labels = obj.get("labels")
                if not isinstance(labels, list) or not labels or not all(isinstance(s, str) for s in labels):
                    raise DataError(f"{path}:{lineno}: 'labels' must be a nonempty array of strings")
                records.append((lineno, trace, labels))
            else:
                label = obj.get("label")
                if not isinstance(label, str):
                    raise DataError(f"{path}:{lineno}: 'label' must be a string")
                records.append((lineno, trace, label))
    return records


def _parse_csv(path):
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return records
        if [h.strip() for h in header] != ["label", "trace"]:
            raise DataError(f"{path}:1: expected header 'label,trace'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            label, trace_field = row
            records.append((lineno, trace_field.split(), label))
    return records


def load_dataset(path, format: str = "jsonl") -> LabeledDataset:
    """Load a labeled dataset from a JSONL or CSV file.

    Alphabet and class list are built in first-appearance order; traces
    are encoded to symbol ids.  Empty traces are rejected (there is no
    node for a DFA to classify them differently from the empty prefix).
    """
    if format == "jsonl":
        records = _parse_jsonl(path, multi_label=False)
    elif format == "csv":
        records = _parse_csv(path)
    else:
        raise DataError(f"unknown format: {format!r} (expected 'jsonl' or 'csv')")
    if not records:
        raise DataError(f"{path}: no records")

    alphabet = Alphabet.build(s for _, trace, _ in records for s in trace)
    classes = []
    class_index = {}
    items = []
    for lineno, trace, label in records:
        if not trace:
            raise DataError(f"{path}:{lineno}: empty trace in training data")
        if label not in class_index:
            class_index[label] = len(classes)
            classes.append(label)
        items.append((alphabet.encode(trace), class_index[label]))
    return LabeledDataset(alphabet, tuple(items), tuple(classes))


def load_multilabel_dataset(path) -> MultiLabelDataset:
    """Load a JSONL dataset whose records carry a 'labels' array each."""
    records = _parse_jsonl(path, multi_label=True)
    if not records:
        raise DataError(f"{path}: no records")
    alphabet = Alphabet.build(s for _, trace, _ in records for s in trace)
    classes = []
    class_index = {}
    items = []
    for lineno, trace, labels in records:
        if not trace:
            raise DataError(f"{path}:{lineno}: empty trace in training data")
        ids = set()
        for label in labels:
            if label not in class_index:
                class_index[label] = len(classes)
                classes.append(label)
            ids.add(class_index[label])
        items.append((alphabet.encode(trace), frozenset(ids)))
    return MultiLabelDataset(alphabet, tuple(items), tuple(classes))


@dataclass(frozen=True)
class SplitResult:
    """Stratified split plus the classes too small to contribute validation."""

    train: LabeledDataset
    validation: LabeledDataset
    single_trace_classes: tuple


def split_train_validation(dataset: LabeledDataset, fraction: float, seed: int) -> SplitResult:
    """Per-class stratified split, deterministic given the seed.

    Each class sends floor(fraction * count) traces to validation, at
    least 1 when it has 2 or more.  A class with a single trace keeps it
    in training and is reported in ``single_trace_classes``.
    """
    if not (0.0 < fraction < 1.0):
        raise DataError(f"fraction must be in (0, 1), got {fraction}")
    rng = random.Random(seed)
    by_class = [[] for _ in dataset.classes]
    for idx, (_, label) in enumerate(dataset.items):
        by_class[label].append(idx)

    val_indices = set()
    warned = []
    for label, indices in enumerate(by_class):
        if len(indices) < 2:
            if indices:
                warned.append(dataset.classes[label])
            continue
        k = max(1, math.floor(fraction * len(indices)))
        picked = rng.sample(indices, k)
        val_indices.update(picked)

    train_items = tuple(item for i, item in enumerate(dataset.items) if i not in val_indices)
    val_items = tuple(item for i, item in enumerate(dataset.items) if i in val_indices)
    train = LabeledDataset(dataset.alphabet, train_items, dataset.classes)
    validation = LabeledDataset(dataset.alphabet, val_items, dataset.classes)
    return SplitResult(train, validation, tuple(warned))


def binarize(dataset: LabeledDataset, target: int) -> list:
    """One-vs-rest view: list of (trace, is_positive) in dataset order."""
    if not (0 <= target < len(dataset.classes)):
        raise DataError(f"invalid target class id: {target}")
    return [(trace, label == target) for trace, label in dataset.items]
