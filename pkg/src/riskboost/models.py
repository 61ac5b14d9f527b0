"""Model types: one-sided decision stumps, risk scores, threshold trees."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .errors import ContractError, DomainError


@dataclass(frozen=True)
class Stump:
    """One-sided threshold rule: predict +1 iff x[feature] >= theta.

    The mirrored rule (+1 below the threshold) is deliberately absent; every
    stump is nondecreasing in its feature, which is what makes ensembles of
    them certifiably robust.
    """

    feature: int
    theta: float

    def __post_init__(self) -> None:
        if self.feature < 0:
            raise DomainError(f"stump feature must be >= 0, got {self.feature}")
        if not np.isfinite(self.theta):
            raise DomainError(f"stump threshold must be finite, got {self.theta}")

    def predict(self, x) -> int:
        return 1 if x[self.feature] >= self.theta else -1

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        return np.where(X[:, self.feature] >= self.theta, 1, -1)


@dataclass(frozen=True)
class Condition:
    """A scorecard row: `weight` points when x[feature] >= theta.

    Weights are nonzero integers. Trained models only ever carry positive
    weights; negative weights are representable so that structural checks
    (see `riskboost.robustness.is_monotone_structure`) have something to
    reject.
    """

    feature: int
    theta: float
    weight: int

    def __post_init__(self) -> None:
        if self.feature < 0:
            raise DomainError(f"condition feature must be >= 0, got {self.feature}")
        if not np.isfinite(self.theta):
            raise DomainError(f"condition threshold must be finite, got {self.theta}")
        if not isinstance(self.weight, (int, np.integer)) or self.weight == 0:
            raise DomainError(f"condition weight must be a nonzero integer, got {self.weight!r}")


@dataclass(frozen=True)
class RiskScore:
    """Integer scorecard classifier.

    score(x) = bias + sum of weights of satisfied conditions, and the
    prediction is +1 exactly when the score is strictly positive (a score of
    zero predicts -1). The bias is stored doubled (`bias2`, the numerator
    over a fixed denominator of 2) so that half-integer biases keep all
    arithmetic exact; `score2` below is the doubled score.
    """

    conditions: tuple[Condition, ...]
    bias2: int

    def __post_init__(self) -> None:
        if not isinstance(self.bias2, (int, np.integer)):
            raise DomainError(f"bias2 must be an integer, got {self.bias2!r}")
        object.__setattr__(self, "bias2", int(self.bias2))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        seen = set()
        for c in self.conditions:
            key = (c.feature, c.theta)
            if key in seen:
                raise DomainError(f"duplicate condition on feature {c.feature} at {c.theta}")
            seen.add(key)

    @property
    def bias(self) -> float:
        return self.bias2 / 2.0

    def score2(self, x) -> int:
        s = self.bias2
        for c in self.conditions:
            if x[c.feature] >= c.theta:
                s += 2 * c.weight
        return s

    def predict(self, x) -> int:
        return 1 if self.score2(x) > 0 else -1

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        s = np.full(X.shape[0], self.bias2, dtype=np.int64)
        for c in self.conditions:
            s += np.where(X[:, c.feature] >= c.theta, 2 * c.weight, 0)
        return np.where(s > 0, 1, -1)

    def max_feature(self) -> int:
        return max((c.feature for c in self.conditions), default=-1)


def merge_rounds(stumps, rounds_run: int) -> RiskScore:
    """Merge one round-per-stump output into a canonical scorecard.

    Each stump contributes weight 1; repeated (feature, theta) pairs merge by
    summing. The bias is -rounds_run / 2 (stored doubled), i.e. the majority
    vote over the rounds actually run. Conditions are sorted by
    (feature, theta).
    """
    acc: dict[tuple[int, float], int] = {}
    for s in stumps:
        key = (s.feature, s.theta)
        acc[key] = acc.get(key, 0) + 1
    conds = tuple(
        Condition(feature=f, theta=t, weight=w) for (f, t), w in sorted(acc.items())
    )
    return RiskScore(conditions=conds, bias2=-rounds_run)


@dataclass(frozen=True)
class Leaf:
    label: int

    def __post_init__(self) -> None:
        if self.label not in (-1, 1):
            raise DomainError(f"leaf label must be -1 or +1, got {self.label}")


@dataclass(frozen=True)
class Split:
    """Internal node: x[feature] <= theta goes left, otherwise right."""

    feature: int
    theta: float
    left: "Node"
    right: "Node"

    def __post_init__(self) -> None:
        if self.feature < 0:
            raise DomainError(f"split feature must be >= 0, got {self.feature}")
        if not np.isfinite(self.theta):
            raise DomainError(f"split threshold must be finite, got {self.theta}")


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class DecisionTree:
    """Binary threshold tree over `n_features` features."""

    root: Node
    n_features: int

    def __post_init__(self) -> None:
        if self.n_features < 1:
            raise DomainError(f"n_features must be >= 1, got {self.n_features}")
        hi = _max_feature(self.root)
        if hi >= self.n_features:
            raise DomainError(
                f"tree refers to feature {hi} but declares only {self.n_features} features"
            )

    def predict(self, x) -> int:
        node = self.root
        while isinstance(node, Split):
            node = node.left if x[node.feature] <= node.theta else node.right
        return node.label

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0], dtype=np.int64)
        self._fill(self.root, X, np.arange(X.shape[0]), out)
        return out

    def _fill(self, node: Node, X, idx, out) -> None:
        if isinstance(node, Leaf):
            out[idx] = node.label
            return
        go_left = X[idx, node.feature] <= node.theta
        self._fill(node.left, X, idx[go_left], out)
        self._fill(node.right, X, idx[~go_left], out)


def _max_feature(node: Node) -> int:
    if isinstance(node, Leaf):
        return -1
    return max(node.feature, _max_feature(node.left), _max_feature(node.right))


def tree_size(tree: DecisionTree) -> int:
    """Number of internal (split) nodes."""

    def count(node: Node) -> int:
        if isinstance(node, Leaf):
            return 0
        return 1 + count(node.left) + count(node.right)

    return count(tree.root)


def tree_depth(tree: DecisionTree) -> int:
    """Length of the longest root-to-leaf path, in splits."""

    def depth(node: Node) -> int:
        if isinstance(node, Leaf):
            return 0
        return 1 + max(depth(node.left), depth(node.right))

    return depth(tree.root)


def leaf_boxes(tree: DecisionTree) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield (label, lo, hi) for every leaf's axis-aligned cell.

    The cell of a leaf is {x : lo < x <= hi} componentwise, with +-inf for
    unconstrained sides; lower bounds are open because right branches take
    x > theta. Distance computations use the closure, matching the infimum
    semantics of the robustness operations.
    """
    lo = np.full(tree.n_features, -np.inf)
    hi = np.full(tree.n_features, np.inf)

    def walk(node: Node):
        if isinstance(node, Leaf):
            yield node.label, lo.copy(), hi.copy()
            return
        f, t = node.feature, node.theta
        keep = hi[f]
        hi[f] = min(hi[f], t)
        yield from walk(node.left)
        hi[f] = keep
        keep = lo[f]
        lo[f] = max(lo[f], t)
        yield from walk(node.right)
        lo[f] = keep

    yield from walk(tree.root)


def validate_tree(tree: DecisionTree) -> None:
    """Reject trees with a contradictory root-to-leaf path (empty cell)."""
    for _, lo, hi in leaf_boxes(tree):
        bad = lo >= hi
        if np.any(bad):
            f = int(np.argmax(bad))
            raise ContractError(
                f"contradictory path: feature {f} constrained to ({lo[f]}, {hi[f]}]"
            )
