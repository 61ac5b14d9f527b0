"""Labeled datasets: construction, CSV ingestion, normalization, splitting.

A dataset is an immutable bundle of a float feature matrix, {-1, +1} labels,
feature names, and a nominal per-feature domain. All downstream algorithms
treat it as read-only; derived datasets are new objects.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, IngestError, SplitError


@dataclass(frozen=True)
class LabeledExample:
    """A single feature vector with its label (+1 or -1)."""

    x: np.ndarray
    y: int


@dataclass(frozen=True)
class LabeledDataset:
    """An immutable labeled sample.

    Attributes
    ----------
    X : float64 array of shape (n, d), all entries finite.
    y : int array of shape (n,), entries in {-1, +1}.
    feature_names : one name per column.
    domain : nominal closed interval (lo, hi) per feature. Data produced by
        `normalize` lives in [0, 1]^d; generator output states its intended
        range, which individual points may not fill.
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    domain: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        X = np.ascontiguousarray(np.asarray(self.X, dtype=np.float64))
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2:
            raise DomainError(f"feature matrix must be 2-D, got shape {X.shape}")
        if X.shape[0] == 0:
            raise DomainError("dataset must contain at least one example")
        if y.shape != (X.shape[0],):
            raise DomainError(
                f"label vector shape {y.shape} does not match {X.shape[0]} rows"
            )
        if not np.all(np.isfinite(X)):
            i, j = np.argwhere(~np.isfinite(X))[0]
            raise DomainError(f"non-finite feature value at row {i}, column {j}")
        bad = (y != 1) & (y != -1)
        if np.any(bad):
            raise DomainError(
                f"labels must be -1 or +1; row {int(np.argmax(bad))} has {y[np.argmax(bad)]}"
            )
        if len(self.feature_names) != X.shape[1]:
            raise DomainError("feature_names length does not match column count")
        if len(self.domain) != X.shape[1]:
            raise DomainError("domain length does not match column count")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(
            self, "domain", tuple((float(lo), float(hi)) for lo, hi in self.domain)
        )

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def example(self, i: int) -> LabeledExample:
        return LabeledExample(x=self.X[i], y=int(self.y[i]))

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            X=self.X[idx].copy(),
            y=self.y[idx].copy(),
            feature_names=self.feature_names,
            domain=self.domain,
        )


def make_dataset(X, y, feature_names=None, domain=None) -> LabeledDataset:
    """Build a LabeledDataset, defaulting names to f0.. and domain to observed ranges."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if feature_names is None:
        feature_names = tuple(f"f{j}" for j in range(X.shape[1]))
    if domain is None:
        domain = tuple(
            (float(X[:, j].min()), float(X[:, j].max())) for j in range(X.shape[1])
        )
    return LabeledDataset(X=X, y=np.asarray(y), feature_names=tuple(feature_names), domain=tuple(domain))


@dataclass(frozen=True)
class WeightedDataset:
    """A dataset paired with a probability distribution over its examples.

    mu is nonnegative and sums to 1 within 1e-9. Individual weights may be
    exactly zero; such examples are skipped by threshold sweeps but still
    count (with weight zero) in accuracy recomputations.
    """

    base: LabeledDataset
    mu: np.ndarray

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=np.float64)
        if mu.shape != (self.base.n,):
            raise DomainError(f"weight vector shape {mu.shape} does not match n={self.base.n}")
        if np.any(mu < 0.0):
            raise DomainError(f"negative weight at index {int(np.argmax(mu < 0.0))}")
        total = float(mu.sum())
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"weights sum to {total!r}, expected 1 within 1e-9")
        mu = mu.copy()
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)


def ingest_csv(path, label_column: str, positive_value: str) -> LabeledDataset:
    """Parse a headed CSV into a LabeledDataset.

    Every non-label column must be numeric and finite. The label equals +1
    exactly when the cell's text matches `positive_value`; any other content
    maps to -1. Errors name the offending row and column.
    """
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise IngestError(f"{path}: file is empty") from None
            rows = [row for row in reader if row]
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from exc
    header = [h.strip() for h in header]
    if label_column not in header:
        raise IngestError(f"{path}: label column {label_column!r} not in header {header}")
    label_idx = header.index(label_column)
    feature_names = tuple(h for i, h in enumerate(header) if i != label_idx)
    if not feature_names:
        raise IngestError(f"{path}: no feature columns besides the label")
    if not rows:
        raise IngestError(f"{path}: no data rows")

    X = np.empty((len(rows), len(feature_names)), dtype=np.float64)
    y = np.empty(len(rows), dtype=np.int64)
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise IngestError(
                f"{path}: row {r + 2} has {len(row)} cells, header has {len(header)}"
            )
        c = 0
        for i, cell in enumerate(row):
            if i == label_idx:
                y[r] = 1 if cell.strip() == positive_value else -1
                continue
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(
                    f"{path}: row {r + 2}, column {header[i]!r}: non-numeric cell {cell!r}"
                ) from None
            if not math.isfinite(v):
                raise IngestError(
                    f"{path}: row {r + 2}, column {header[i]!r}: non-finite value {cell!r}"
                )
            X[r, c] = v
            c += 1
    return make_dataset(X, y, feature_names=feature_names)


def normalize(ds: LabeledDataset):
    """Min-max scale every feature to [0, 1] over the whole dataset.

    Constant features map to 0. Returns the scaled dataset together with the
    per-feature (min, max) statistics needed to transform held-out data.
    Applying normalize to its own output is the identity (within rounding).
    """
    lo = ds.X.min(axis=0)
    hi = ds.X.max(axis=0)
    stats = tuple((float(a), float(b)) for a, b in zip(lo, hi))
    return apply_normalization(ds, stats), stats


def apply_normalization(ds: LabeledDataset, stats) -> LabeledDataset:
    """Apply previously computed (min, max) statistics to a dataset.

    A feature that was constant in the fitted data is shifted by its constant
    (so the fitted data sits at 0) but not rescaled. Held-out values may land
    outside [0, 1]; that is intentional.
    """
    if len(stats) != ds.d:
        raise DomainError(f"stats for {len(stats)} features, dataset has {ds.d}")
    lo = np.array([s[0] for s in stats], dtype=np.float64)
    hi = np.array([s[1] for s in stats], dtype=np.float64)
    span = hi - lo
    span[span <= 0.0] = 1.0
    X = (ds.X - lo) / span
    return LabeledDataset(
        X=X,
        y=ds.y.copy(),
        feature_names=ds.feature_names,
        domain=tuple((0.0, 1.0) for _ in range(ds.d)),
    )


def split(ds: LabeledDataset, train_fraction: float, seed: int):
    """Deterministic train/test partition; train receives ceil(n * fraction) rows.

    The fraction product is rounded to 9 decimals before the ceiling so that
    float dust (e.g. 9 * (2/3) = 6.000000000000001) cannot inflate the train
    side. Both sides are always nonempty.
    """
    if not 0.0 < train_fraction < 1.0:
        raise DomainError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if ds.n < 2:
        raise SplitError(f"need at least 2 examples to split, got {ds.n}")
    k = math.ceil(round(ds.n * train_fraction, 9))
    k = min(max(k, 1), ds.n - 1)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(ds.n)
    train_idx = np.sort(perm[:k])
    test_idx = np.sort(perm[k:])
    return ds.subset(train_idx), ds.subset(test_idx)
