"""Dyadic dataset assembly: node ordering, dyad canonicalization, CSV ingestion.

A dataset holds one observation per unordered node pair. Nodes are
identified by string labels and carry a scalar order value; sorting by
that value (ties broken by label) assigns each node a rank in ``1..n``.
All estimation code downstream works on ranks only.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateDyadError,
    DyadDataError,
    EmptyDatasetError,
    RaggedRegressorsError,
    SelfLoopError,
    UnknownLabelError,
)

__all__ = [
    "NodeOrder",
    "DyadicDataset",
    "build_dataset",
    "canonical_dyads",
    "complete_dyads",
    "expand_node_effects",
    "read_dyad_csv",
    "read_order_csv",
]


class NodeOrder:
    """Node labels arranged by ascending order value.

    The constructor takes labels already in rank order; use
    :meth:`from_values` to sort labels by an observed order variable and
    :meth:`identity` when nodes are generated in rank order to begin with.
    """

    __slots__ = ("labels", "_rank")

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(lab) for lab in labels)
        if not labels:
            raise DyadDataError("a node order needs at least one node")
        rank = {lab: r for r, lab in enumerate(labels, start=1)}
        if len(rank) != len(labels):
            raise DyadDataError("node labels must be unique")
        self.labels = labels
        self._rank = rank

    @classmethod
    def from_values(cls, labels: Sequence[str], values: Sequence[float]) -> "NodeOrder":
        """Sort ``labels`` ascending by ``values``, ties broken by label."""
        if len(labels) != len(values):
            raise DyadDataError("labels and order values must have equal length")
        pairs = sorted(zip(values, (str(lab) for lab in labels)))
        return cls(lab for _, lab in pairs)

    @classmethod
    def identity(cls, n: int) -> "NodeOrder":
        """Order of ``n`` nodes labelled ``"1" .. "n"`` by their own index."""
        if n < 1:
            raise DyadDataError(f"node count must be positive, got {n}")
        return cls(str(r) for r in range(1, n + 1))

    def rank(self, label: str) -> int:
        """Rank of ``label`` in ``1..n``; unknown labels raise."""
        try:
            return self._rank[str(label)]
        except KeyError:
            raise UnknownLabelError(f"node label {label!r} is not in the ordering") from None

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodeOrder) and self.labels == other.labels

    def __repr__(self) -> str:
        return f"NodeOrder({len(self.labels)} nodes)"


def canonical_dyads(dyads: np.ndarray, n: int) -> np.ndarray:
    """Validate an ``(M, 2)`` array of node ranks and put each row in ``i < j`` order.

    Raises on ranks outside ``1..n``, self loops, and duplicate pairs
    (regardless of orientation). Returns a new int64 array.
    """
    arr = np.asarray(dyads)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DyadDataError(f"dyads must have shape (M, 2), got {arr.shape}")
    if arr.shape[0] == 0:
        raise EmptyDatasetError("no dyads were supplied")
    if not np.issubdtype(arr.dtype, np.integer):
        cast = arr.astype(np.int64)
        if not np.array_equal(cast, arr):
            raise DyadDataError("dyad ranks must be integers")
        arr = cast
    arr = arr.astype(np.int64, copy=True)
    if arr.min() < 1 or arr.max() > n:
        bad = arr[((arr < 1) | (arr > n)).any(axis=1)][0]
        raise DyadDataError(f"dyad {tuple(bad)} has a rank outside 1..{n}")
    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        row = int(np.flatnonzero(loops)[0])
        raise SelfLoopError(f"dyad row {row} links node rank {arr[row, 0]} to itself")
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    out = np.column_stack([lo, hi])
    keys = lo * np.int64(n + 1) + hi
    uniq, counts = np.unique(keys, return_counts=True)
    if (counts > 1).any():
        key = int(uniq[np.argmax(counts > 1)])
        raise DuplicateDyadError(
            f"node pair ({key // (n + 1)}, {key % (n + 1)}) appears more than once"
        )
    return out


def complete_dyads(n: int) -> np.ndarray:
    """All ``n(n-1)/2`` canonical dyads on ``n`` nodes, in row-major order."""
    i, j = np.triu_indices(n, k=1)
    return np.column_stack([i + 1, j + 1]).astype(np.int64)


@dataclass(frozen=True, eq=False)
class DyadicDataset:
    """One regression observation per unordered node pair.

    Attributes
    ----------
    n : int
        Number of nodes in the ordering.
    dyads : ndarray of shape (M, 2)
        Node ranks per observation, canonical ``i < j``, values in ``1..n``.
    y : ndarray of shape (M,)
        Outcome.
    X : ndarray of shape (M, K)
        Regressors; column 1 is the intercept when one is present.
    order : NodeOrder
        Label-to-rank mapping the dyads were encoded with.
    x_names : tuple of str
        One name per regressor column.
    """

    n: int
    dyads: np.ndarray
    y: np.ndarray
    X: np.ndarray
    order: NodeOrder
    x_names: tuple[str, ...]

    def __post_init__(self):
        m = self.dyads.shape[0]
        if self.y.shape != (m,):
            raise DyadDataError(f"y has shape {self.y.shape}, expected ({m},)")
        if self.X.ndim != 2 or self.X.shape[0] != m:
            raise DyadDataError(f"X has shape {self.X.shape}, expected ({m}, K)")
        if len(self.x_names) != self.X.shape[1]:
            raise DyadDataError("x_names must match the number of regressor columns")
        if len(self.order) != self.n:
            raise DyadDataError("order size does not match the node count")
        for name in ("dyads", "y", "X"):
            getattr(self, name).setflags(write=False)

    @property
    def m(self) -> int:
        """Number of dyad observations."""
        return self.dyads.shape[0]

    @property
    def k(self) -> int:
        """Number of regressor columns."""
        return self.X.shape[1]

    @property
    def is_complete(self) -> bool:
        """Whether every unordered node pair is observed."""
        return 2 * self.m == self.n * (self.n - 1)


def build_dataset(
    rows: Iterable[tuple],
    order: NodeOrder,
    x_names: Sequence[str] | None = None,
) -> DyadicDataset:
    """Assemble a :class:`DyadicDataset` from parsed dyad records.

    Parameters
    ----------
    rows : iterable of (label_i, label_j, y, x_row)
        One record per dyad. ``x_row`` is a sequence of regressor values;
        all records must have the same length.
    order : NodeOrder
        Maps labels to ranks. Labels absent from the order raise.
    x_names : sequence of str, optional
        Regressor column names; defaults to ``x1 .. xK``.
    """
    rows = list(rows)
    if not rows:
        raise EmptyDatasetError("no dyad rows were supplied")
    n = len(order)
    width = len(rows[0][3])
    if width < 1:
        raise DyadDataError("at least one regressor column is required")
    raw = np.empty((len(rows), 2), dtype=np.int64)
    y = np.empty(len(rows))
    X = np.empty((len(rows), width))
    for pos, (label_i, label_j, y_val, x_row) in enumerate(rows):
        if str(label_i) == str(label_j):
            raise SelfLoopError(f"dyad row {pos} links node {label_i!r} to itself")
        if len(x_row) != width:
            raise RaggedRegressorsError(
                f"dyad row {pos} has {len(x_row)} regressors, expected {width}"
            )
        raw[pos, 0] = order.rank(label_i)
        raw[pos, 1] = order.rank(label_j)
        y[pos] = y_val
        X[pos] = x_row
    dyads = canonical_dyads(raw, n)
    if x_names is None:
        x_names = tuple(f"x{k}" for k in range(1, width + 1))
    else:
        x_names = tuple(str(nm) for nm in x_names)
    return DyadicDataset(n=n, dyads=dyads, y=y, X=X, order=order, x_names=x_names)


def expand_node_effects(ds: DyadicDataset) -> DyadicDataset:
    """Append additive node-effect dummy columns to the regressor matrix.

    Each node of rank ``2..n`` receives a column that equals one whenever
    the dyad has that node as an endpoint; the rank-1 node's dummy is
    dropped so the block is not collinear with an intercept. Original
    columns, the intercept included, are preserved. Any residual
    collinearity is left for the pseudo-inverse path of the fit.
    """
    m, n = ds.m, ds.n
    dummies = np.zeros((m, n - 1))
    rows = np.arange(m)
    for col in (0, 1):
        ranks = ds.dyads[:, col]
        keep = ranks >= 2
        dummies[rows[keep], ranks[keep] - 2] = 1.0
    names = ds.x_names + tuple(f"fe_{lab}" for lab in ds.order.labels[1:])
    X = np.hstack([ds.X, dummies])
    return replace(ds, X=X, x_names=names)


def _parse_float(text: str, where: str, lineno: int, field: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DyadDataError(
            f"{where}: line {lineno}: field {field!r} is not a number: {text.strip()!r}"
        ) from None
    if not np.isfinite(value):
        raise DyadDataError(f"{where}: line {lineno}: field {field!r} must be finite")
    return value


def read_order_csv(path: str | os.PathLike) -> NodeOrder:
    """Read a node ordering from a CSV with header ``node,order_value``."""
    where = os.fspath(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DyadDataError(f"{where}: file is empty")
        if [h.strip() for h in header] != ["node", "order_value"]:
            raise DyadDataError(
                f"{where}: expected header 'node,order_value', got {','.join(header)!r}"
            )
        labels: list[str] = []
        values: list[float] = []
        seen: dict[str, int] = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DyadDataError(f"{where}: line {lineno}: expected 2 fields, got {len(row)}")
            label = row[0].strip()
            if not label:
                raise DyadDataError(f"{where}: line {lineno}: empty node label")
            if label in seen:
                raise DyadDataError(
                    f"{where}: line {lineno}: duplicate node {label!r} "
                    f"(first seen on line {seen[label]})"
                )
            seen[label] = lineno
            labels.append(label)
            values.append(_parse_float(row[1], where, lineno, "order_value"))
    if not labels:
        raise DyadDataError(f"{where}: no node rows")
    return NodeOrder.from_values(labels, values)


def read_dyad_csv(path: str | os.PathLike) -> tuple[list[tuple], tuple[str, ...]]:
    """Read dyad records from a CSV with header ``node_i,node_j,y,<x columns>``.

    Returns the parsed rows in file order plus the regressor column names,
    ready to hand to :func:`build_dataset`.
    """
    where = os.fspath(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DyadDataError(f"{where}: file is empty")
        header = [h.strip() for h in header]
        if header[:3] != ["node_i", "node_j", "y"] or len(header) < 4:
            raise DyadDataError(
                f"{where}: expected header 'node_i,node_j,y,<at least one regressor>', "
                f"got {','.join(header)!r}"
            )
        x_names = tuple(header[3:])
        rows: list[tuple] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DyadDataError(
                    f"{where}: line {lineno}: expected {len(header)} fields, got {len(row)}"
                )
            label_i, label_j = row[0].strip(), row[1].strip()
            if not label_i or not label_j:
                raise DyadDataError(f"{where}: line {lineno}: empty node label")
            y_val = _parse_float(row[2], where, lineno, "y")
            x_row = tuple(
                _parse_float(cell, where, lineno, x_names[k]) for k, cell in enumerate(row[3:])
            )
            rows.append((label_i, label_j, y_val, x_row))
    if not rows:
        raise DyadDataError(f"{where}: no dyad rows")
    return rows, x_names
