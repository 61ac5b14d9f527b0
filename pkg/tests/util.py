"""Shared builders and brute-force oracles.

Every oracle here prefers the dumbest correct computation available:
exhaustive enumeration, direct summation, candidate-product attacks. Tests
compare the library's fast paths against these.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from riskboost import Condition, RiskScore, WeightedDataset, make_dataset
from riskboost.models import DecisionTree, Leaf, Split


def dyadic_weights(rng: np.random.Generator, n: int, denom_bits: int = 10) -> np.ndarray:
    """Random probability vector whose entries are exact multiples of 2^-k.

    Sums of such weights are exact in binary floating point, so weighted
    accuracies computed in any order agree bit for bit; comparisons against
    sweep implementations can then demand equality, tie-breaks included.
    """
    denom = 2 ** denom_bits
    counts = rng.multinomial(denom, np.full(n, 1.0 / n))
    return counts / denom


def random_weighted_dataset(rng: np.random.Generator, n: int, d: int,
                            with_zeros: bool = True) -> WeightedDataset:
    X = rng.integers(0, 8, size=(n, d)).astype(np.float64) / 8.0
    y = np.where(rng.random(n) < 0.5, 1, -1)
    if y.min() == y.max():  # ensure both labels appear
        y[0] = -y[0]
    mu = dyadic_weights(rng, n)
    if with_zeros and n >= 4:
        # zero out a couple of entries, renormalizing within the dyadic family
        dead = rng.choice(n, size=2, replace=False)
        freed = mu[dead].sum()
        mu[dead] = 0.0
        alive = np.flatnonzero(mu)
        mu[alive[0]] += freed
    return WeightedDataset(base=make_dataset(X, y), mu=mu)


def brute_best_stump(wds: WeightedDataset):
    """Exhaustive one-sided stump search with the library's tie-break order.

    Candidates per feature: midpoints between consecutive distinct values of
    the positive-weight examples, one threshold below all values, one above
    all. Returns (feature, theta, weighted_accuracy).
    """
    X, y, mu = wds.base.X, wds.base.y, wds.mu
    live = mu > 0
    best = None
    for f in range(wds.base.d):
        vals = np.unique(X[live, f])
        thetas = [vals[0] - 1.0]
        thetas += [(a + b) / 2.0 for a, b in zip(vals[:-1], vals[1:])]
        thetas += [vals[-1] + 1.0]
        for theta in thetas:
            pred = np.where(X[:, f] >= theta, 1, -1)
            acc = float(np.sum(mu[pred == y]))
            key = (-acc, f, theta)
            if best is None or key < best[0]:
                best = (key, f, float(theta), acc)
    _, f, theta, acc = best
    return f, theta, acc


def binomial_tail_leq(k: int, j: int, p: float) -> float:
    """P(Bin(k, p) <= j) via math.comb; exact combinatorics, float products."""
    if j < 0:
        return 0.0
    if j >= k:
        return 1.0
    return sum(math.comb(k, u) * p ** u * (1.0 - p) ** (k - u) for u in range(j + 1))


def brute_min_vertex_cover_size(adj, n_left: int, n_right: int) -> int:
    """Minimum vertex cover size by enumerating subsets of the left side.

    For any cover, the left vertices chosen determine the cheapest right
    completion: every edge from an unchosen left vertex forces its right
    endpoint. Enumerating all 2^n_left choices is exact for n_left <= ~16.
    """
    best = n_left + n_right
    for mask in range(1 << n_left):
        forced = set()
        for u in range(n_left):
            if not (mask >> u) & 1:
                forced.update(adj[u])
        size = bin(mask).count("1") + len(forced)
        if size < best:
            best = size
    return best


def random_bipartite(rng: np.random.Generator, n_left: int, n_right: int, p: float):
    return [
        [v for v in range(n_right) if rng.random() < p] for _ in range(n_left)
    ]


def _model_thresholds(model) -> dict[int, list[float]]:
    per: dict[int, list[float]] = {}
    if isinstance(model, RiskScore):
        for c in model.conditions:
            per.setdefault(c.feature, []).append(c.theta)
    else:
        def walk(node):
            if isinstance(node, Split):
                per.setdefault(node.feature, []).append(node.theta)
                walk(node.left)
                walk(node.right)
        walk(model.root)
    return per


def attack_radius(model, x, n_features: int, probe: float = 1e-6,
                  lo: float = -np.inf, hi: float = np.inf) -> float:
    """Black-box flip radius via a candidate-product attack.

    Per feature the adversary only ever benefits from landing just at or
    just past a threshold, so the candidate values are x[f] plus every
    threshold nudged by +-probe (and exactly); the cartesian product over
    features is scanned for the smallest l-inf flip. An upper bound on the
    true infimum, within `probe` of it for these threshold models.
    """
    x = np.asarray(x, dtype=np.float64)
    pred = model.predict(x)
    per = _model_thresholds(model)
    axes = []
    for f in range(n_features):
        cands = {float(x[f])}
        for t in per.get(f, []):
            for v in (t - probe, t, t + probe):
                if lo <= v <= hi:
                    cands.add(float(v))
        axes.append(sorted(cands))
    best = np.inf
    z = x.copy()
    for combo in itertools.product(*axes):
        z[:] = combo
        r = float(np.max(np.abs(z - x)))
        if r < best and model.predict(z) != pred:
            best = r
    return best


def random_risk_score(rng: np.random.Generator, d: int, max_conds: int = 6,
                      signed: bool = False) -> RiskScore:
    n_conds = int(rng.integers(1, max_conds + 1))
    conds = []
    seen = set()
    for _ in range(n_conds):
        f = int(rng.integers(0, d))
        theta = float(rng.integers(0, 9)) / 8.0
        if (f, theta) in seen:
            continue
        seen.add((f, theta))
        w = int(rng.integers(1, 4))
        if signed and rng.random() < 0.4:
            w = -w
        conds.append(Condition(feature=f, theta=theta, weight=w))
    if not conds:
        conds = [Condition(feature=0, theta=0.5, weight=1)]
    bias2 = int(rng.integers(-6, 7))
    return RiskScore(conditions=tuple(conds), bias2=bias2)


def random_tree(rng: np.random.Generator, d: int, depth: int) -> DecisionTree:
    def grow(level: int, lo: np.ndarray, hi: np.ndarray):
        if level == 0 or rng.random() < 0.25:
            return Leaf(label=int(rng.choice([-1, 1])))
        f = int(rng.integers(0, d))
        if hi[f] - lo[f] < 1e-3:
            return Leaf(label=int(rng.choice([-1, 1])))
        theta = float(rng.uniform(lo[f] + 1e-4, hi[f] - 1e-4))
        keep = hi[f]
        hi[f] = theta
        left = grow(level - 1, lo, hi)
        hi[f] = keep
        keep = lo[f]
        lo[f] = theta
        right = grow(level - 1, lo, hi)
        lo[f] = keep
        return Split(feature=f, theta=theta, left=left, right=right)

    root = grow(depth, np.zeros(d), np.ones(d))
    if isinstance(root, Leaf):
        root = Split(feature=0, theta=0.5, left=Leaf(label=-1), right=Leaf(label=1))
    return DecisionTree(root=root, n_features=d)


def brute_min_opposite_distance(X: np.ndarray, y: np.ndarray) -> float:
    pos = X[y == 1]
    neg = X[y == -1]
    best = np.inf
    for a in pos:
        d = np.abs(neg - a).max(axis=1).min()
        best = min(best, float(d))
    return best


def grid_min_1d(fun, lo: float, hi: float, steps: int = 20001) -> tuple[float, float]:
    ts = np.linspace(lo, hi, steps)
    vals = np.array([fun(t) for t in ts])
    i = int(np.argmin(vals))
    return float(ts[i]), float(vals[i])
