"""Threshold trees: a CART baseline and the constructive theory datasets.

The same node convention is used everywhere: x[feature] <= theta goes left.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset, make_dataset
from .errors import ConstructionError, DomainError
from .models import DecisionTree, Leaf, Node, Split, tree_size

_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class TreeTrainConfig:
    max_depth: int
    min_leaf: int = 1

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_leaf < 1:
            raise DomainError(f"min_leaf must be >= 1, got {self.min_leaf}")


def _entropy(pos: np.ndarray, total: np.ndarray) -> np.ndarray:
    """Binary entropy of pos/total in bits, with 0 log 0 = 0."""
    total = np.asarray(total, dtype=np.float64)
    p = np.divide(pos, total, out=np.zeros_like(total), where=total > 0)
    out = np.zeros_like(p)
    for q in (p, 1.0 - p):
        mask = q > 0
        out[mask] -= q[mask] * np.log2(q[mask])
    return out


def _majority(y: np.ndarray) -> int:
    pos = int(np.sum(y == 1))
    neg = len(y) - pos
    return 1 if pos > neg else -1  # tie predicts -1


def train_cart(ds: LabeledDataset, cfg: TreeTrainConfig) -> DecisionTree:
    """Greedy entropy tree with midpoint thresholds.

    At each impure node the (feature, midpoint) pair with the highest
    information gain is chosen, ties broken by smaller feature index then
    smaller threshold. Zero-gain splits of impure nodes are taken (this is
    what lets depth 2 shatter an XOR square); growth stops at purity, the
    depth cap, the min_leaf floor, or when no candidate threshold exists.
    Leaves predict the majority label, ties going to -1.
    """
    X, y = ds.X, ds.y

    def grow(idx: np.ndarray, depth: int) -> Node:
        labels = y[idx]
        pos = int(np.sum(labels == 1))
        if pos == 0 or pos == len(idx):
            return Leaf(label=1 if pos else -1)
        if depth >= cfg.max_depth:
            return Leaf(label=_majority(labels))
        n = len(idx)
        parent_h = float(_entropy(np.array([pos], float), np.array([n], float))[0])
        best = None  # (gain, feature, theta, sorted idx, left count)
        for f in range(ds.d):
            v = X[idx, f]
            order = np.argsort(v, kind="stable")
            vv = v[order]
            cut = np.nonzero(vv[1:] > vv[:-1])[0]
            if len(cut) == 0:
                continue
            n_left = cut + 1
            ok = (n_left >= cfg.min_leaf) & (n - n_left >= cfg.min_leaf)
            if not np.any(ok):
                continue
            pos_prefix = np.cumsum(labels[order] == 1)[cut]
            n_left, pos_left = n_left[ok], pos_prefix[ok]
            n_right = n - n_left
            pos_right = pos - pos_left
            child_h = (
                n_left * _entropy(pos_left, n_left)
                + n_right * _entropy(pos_right, n_right)
            ) / n
            gains = parent_h - child_h
            thetas = (vv[cut] + vv[cut + 1]) / 2.0
            thetas = thetas[ok]
            top = float(gains.max())
            if best is None or top > best[0] + _GAIN_EPS:
                at = np.nonzero(gains >= top - _GAIN_EPS)[0]
                j = at[np.argmin(thetas[at])]
                best = (top, f, float(thetas[j]), order, int(n_left[j]))
        if best is None:
            return Leaf(label=_majority(labels))
        _, f, theta, order, _ = best
        go_left = X[idx, f] <= theta
        return Split(
            feature=f,
            theta=theta,
            left=grow(idx[go_left], depth + 1),
            right=grow(idx[~go_left], depth + 1),
        )

    root = grow(np.arange(ds.n), 0)
    return DecisionTree(root=root, n_features=ds.d)


def grid_tree(ds: LabeledDataset, r: float) -> DecisionTree:
    """Zero-error tree for an r-separated dataset via fixed grid thresholds.

    Thresholds are laid out every Delta = min(r, 1) from each feature's
    domain floor (r > 1 is clamped: a unit grid already splits any
    1-separated pair). Any two opposite-label points differ by >= 2r > Delta
    in some coordinate, so some grid threshold separates them; processing
    the (feature, threshold) pairs in a fixed order and skipping splits with
    an empty side therefore lands every leaf on a single-label cell. Raises
    ConstructionError naming an offending pair if the input is not in fact
    r-separated.

    Depth is at most the pair count, i.e. <= 6d/r on [-1,1]^d and <= 3d/r
    on [0,1]^d.
    """
    if not 0.0 < r:
        raise DomainError(f"r must be positive, got {r}")
    delta = min(r, 1.0)
    pairs: list[tuple[int, float]] = []
    for f in range(ds.d):
        lo, hi = ds.domain[f]
        if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
            raise DomainError(f"feature {f} has unusable domain ({lo}, {hi})")
        levels = int(math.ceil((hi - lo) / delta)) if hi > lo else 0
        for j in range(levels + 1):
            pairs.append((f, lo + j * delta))

    X, y = ds.X, ds.y

    def conflict(idx: np.ndarray) -> tuple[int, int]:
        pos = idx[y[idx] == 1]
        neg = idx[y[idx] == -1]
        diff = np.abs(X[pos][:, None, :] - X[neg][None, :, :]).max(axis=2)
        i, j = np.unravel_index(np.argmin(diff), diff.shape)
        return int(pos[i]), int(neg[j])

    def build(idx: np.ndarray, k: int) -> Node:
        while True:
            labels = y[idx]
            if np.all(labels == labels[0]):
                return Leaf(label=int(labels[0]))
            if k == len(pairs):
                i, j = conflict(idx)
                raise ConstructionError(
                    f"not r-separated at r={r}: examples {i} and {j} have opposite "
                    f"labels but share every grid cell "
                    f"(l-inf distance {np.abs(X[i] - X[j]).max():.6g} < {2 * r:g})"
                )
            f, theta = pairs[k]
            go_left = X[idx, f] <= theta
            left, right = idx[go_left], idx[~go_left]
            k += 1
            if len(left) == 0 or len(right) == 0:
                continue  # split separates nothing here; skip without a node
            return Split(
                feature=f,
                theta=theta,
                left=build(left, k),
                right=build(right, k),
            )

    root = build(np.arange(ds.n), 0)
    return DecisionTree(root=root, n_features=ds.d)


def gen_parity(d: int) -> LabeledDataset:
    """All 2^d points of {-1, 1}^d, labeled +1 iff the number of +1 coordinates is odd.

    Opposite labels differ in an odd number of coordinates, hence at l-inf
    distance exactly 2: the dataset is 1-separated yet requires large trees.
    """
    if not 1 <= d <= 20:
        raise DomainError(f"d must be in [1, 20], got {d}")
    X = np.array(list(itertools.product((-1.0, 1.0), repeat=d)))
    ones = ((X + 1) / 2).sum(axis=1)
    y = np.where(ones % 2 == 1, 1, -1)
    return make_dataset(X, y, domain=tuple((-1.0, 1.0) for _ in range(d)))


def gen_staircase(n: int, eps: float) -> LabeledDataset:
    """n points in groups of four around (i, -i), linearly separable with margin eps/2.

    Group i contributes (i, -i+eps) and (i+eps, -i) labeled +1, and
    (i, -i-eps), (i-eps, -i) labeled -1. Under w = (1/2, 1/2) every point
    has margin exactly eps/2, yet any small tree stays near chance accuracy.
    """
    if n < 4 or n % 4 != 0:
        raise DomainError(f"n must be a positive multiple of 4, got {n}")
    if not 0.0 < eps < 0.5:
        raise DomainError(f"eps must be in (0, 0.5), got {eps}")
    rows = []
    labels = []
    for i in range(1, n // 4 + 1):
        fi = float(i)
        rows += [(fi, -fi + eps), (fi + eps, -fi), (fi, -fi - eps), (fi - eps, -fi)]
        labels += [1, 1, -1, -1]
    return make_dataset(np.array(rows), np.array(labels))


def parity_size_bound_check(tree: DecisionTree, d: int) -> tuple[float, bool]:
    """Evaluate a tree on the parity dataset and check the size lower bound.

    A leaf whose cell pins all d coordinates holds one parity point; any
    other leaf holds a perfectly balanced set. Hence the accuracy is exactly
    1/2 + n_1 / 2^(d+1) with n_1 the number of singleton leaves, and since a
    tree with `size` splits has size + 1 leaves, accuracy can never exceed
    1/2 + (size + 1) / 2^(d+1). The returned flag asserts that capacity form
    of the bound (the complete depth-d tree meets it with equality; n_1 can
    exceed the split count by one, so `size` alone would be falsified).

    Raises DomainError if the tree refers to features outside [0, d).
    """
    if not 1 <= d <= 20:
        raise DomainError(f"d must be in [1, 20], got {d}")
    if tree.n_features > d:
        raise DomainError(
            f"tree declares {tree.n_features} features but the parity cube has {d}"
        )
    ds = gen_parity(d)
    X = ds.X[:, : tree.n_features] if tree.n_features < d else ds.X
    acc = float(np.mean(tree.predict_batch(X) == ds.y))
    capacity = tree_size(tree) + 1
    bound_ok = acc <= 0.5 + capacity / 2 ** (d + 1)
    return acc, bound_ok
