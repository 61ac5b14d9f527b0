"""Exact adversarial radii for risk scores and threshold trees.

All radii follow the infimum convention: the returned value is
inf { ||delta||_inf : prediction flips at x + delta }. Crossing a `>=`
threshold upward is attained at the candidate radius; leaving it downward
happens just beyond, so the infimum itself may not be a witness. Either way
the number is exact, not a bound from an attack.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .boosting import TrainReport
from .dataset import LabeledDataset
from .errors import DomainError, EvalError
from .models import DecisionTree, RiskScore, leaf_boxes


def is_monotone_structure(model: RiskScore) -> bool:
    """True when every condition weight is positive.

    Positive weights make the score nondecreasing in every feature, which is
    the property the certified-radius argument rests on. Trained models
    always satisfy it; hand-built scorecards may not.
    """
    if not isinstance(model, RiskScore):
        raise DomainError(f"expected a RiskScore, got {type(model).__name__}")
    return all(c.weight > 0 for c in model.conditions)


def _check_clip(x: np.ndarray, clip) -> tuple[float, float]:
    if clip is None:
        return -np.inf, np.inf
    lo, hi = float(clip[0]), float(clip[1])
    if not lo < hi:
        raise DomainError(f"clip interval must satisfy lo < hi, got ({lo}, {hi})")
    if np.any(x < lo) or np.any(x > hi):
        raise EvalError(
            "point lies outside the clip box; clipped radii are undefined for it"
        )
    return lo, hi


def _feature_extreme(v, conds, radius, lo, hi, minimize):
    """Best per-feature doubled-score contribution reachable within `radius`.

    `conds` is the (theta, 2*weight) list for one feature. The adversary
    moves the coordinate to a single new value; every distinct outcome is
    either staying, landing exactly on a threshold above v (turning on all
    thresholds up to it), or dropping just below a threshold at or under v
    (turning off it and everything above). Validity is taken in the limit:
    a downward crossing counts as soon as radius >= v - theta.
    """
    options = [sum(w2 for t, w2 in conds if v >= t)]
    for t, _ in conds:
        if t > v:
            if t - v <= radius and t <= hi:
                options.append(sum(w2 for u, w2 in conds if u <= t))
        else:
            if v - t <= radius and t > lo:
                options.append(sum(w2 for u, w2 in conds if u < t))
    return min(options) if minimize else max(options)


def er_risk_score(model: RiskScore, x, clip=None) -> float:
    """Exact l-inf distance from x to the risk score's decision boundary.

    Works for arbitrary integer weights, positive or negative: each feature
    is optimized independently (the score is additive across features), and
    the candidate radii are the threshold gaps |x[f] - theta|. With `clip`
    = (lo, hi) the perturbed point is confined to that box. Returns inf when
    no perturbation can flip the prediction.
    """
    x = np.asarray(x, dtype=np.float64)
    lo, hi = _check_clip(x, clip)
    pred = model.predict(x)
    per_feature: dict[int, list[tuple[float, int]]] = {}
    for c in model.conditions:
        per_feature.setdefault(c.feature, []).append((c.theta, 2 * c.weight))

    candidates = set()
    for f, conds in per_feature.items():
        v = x[f]
        for t, _ in conds:
            if v >= t:
                if t > lo:
                    candidates.add(float(v - t))
            else:
                if t <= hi:
                    candidates.add(float(t - v))
    for radius in sorted(candidates):
        s2 = model.bias2
        for f, conds in per_feature.items():
            s2 += _feature_extreme(x[f], conds, radius, lo, hi, minimize=(pred == 1))
        if (pred == 1 and s2 <= 0) or (pred == -1 and s2 > 0):
            return radius
    return float("inf")


def er_tree(tree: DecisionTree, x, clip=None) -> float:
    """Exact l-inf distance from x to the nearest opposite-label leaf cell.

    Cell lower bounds are open (right branches take x > theta) so the
    distance to a cell is the distance to its closure, matching the infimum
    convention. With `clip`, cells are intersected with the box first and
    unreachable cells are skipped.
    """
    x = np.asarray(x, dtype=np.float64)
    lo, hi = _check_clip(x, clip)
    pred = tree.predict(x)
    best = np.inf
    for label, bl, bh in leaf_boxes(tree):
        if label == pred:
            continue
        cl = np.maximum(bl, lo)
        ch = np.minimum(bh, hi)
        if np.any(cl > ch):
            continue
        d = np.max(np.maximum(0.0, np.maximum(cl - x, x - ch)))
        if d < best:
            best = float(d)
    return best


def exact_radius(model, x, clip=None) -> float:
    """Dispatch on model kind; see er_risk_score and er_tree."""
    if isinstance(model, RiskScore):
        return er_risk_score(model, x, clip=clip)
    if isinstance(model, DecisionTree):
        return er_tree(model, x, clip=clip)
    raise DomainError(f"no exact radius routine for {type(model).__name__}")


@dataclass(frozen=True)
class RobustnessReport:
    """Adversarial-radius summary over a point sample."""

    n_sampled: int
    radius: float  # the scale astuteness is judged at
    accuracy: float
    astuteness: float  # fraction both correct and with er >= radius
    mean_er: float  # inf-valued radii propagate into the mean
    median_er: float
    ers: np.ndarray
    indices: np.ndarray


def empirical_robustness(
    model,
    ds: LabeledDataset,
    radius: float,
    k: int = 100,
    seed: int = 0,
    clip=None,
) -> RobustnessReport:
    """Exact radii on k points sampled without replacement (all points if k >= n)."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    rng = np.random.default_rng(seed)
    if k >= ds.n:
        idx = np.arange(ds.n)
    else:
        idx = np.sort(rng.choice(ds.n, size=k, replace=False))
    ers = np.array([exact_radius(model, ds.X[i], clip=clip) for i in idx])
    preds = model.predict_batch(ds.X[idx])
    correct = preds == ds.y[idx]
    return RobustnessReport(
        n_sampled=len(idx),
        radius=float(radius),
        accuracy=float(np.mean(correct)),
        astuteness=float(np.mean(correct & (ers >= radius))),
        mean_er=float(np.mean(ers)),
        median_er=float(np.median(ers)),
        ers=ers,
        indices=idx,
    )


@dataclass(frozen=True)
class CertificateCheck:
    n_checked: int
    radius: float
    fraction_violating: float
    min_er: float


def certified_radius_check(
    report: TrainReport, original: LabeledDataset | None = None
) -> CertificateCheck:
    """Verify the training-time robustness certificate.

    Every training point the model classifies correctly on its noisy version
    (the one actually trained on, shifted by -tau * y on every coordinate)
    is certified to have exact radius >= tau at the original point: moving
    any coordinate of the original by less than tau cannot cross below the
    noisy value on the relevant side, and the score is monotone. The check
    recomputes exact radii and counts violations; a tiny slack (1e-9,
    relative) absorbs float dust from reconstructing the originals.

    Pass `original` to check against the true pre-noise dataset instead of
    the reconstruction; the noisy set's row order is the original's.
    """
    model = report.model
    if not is_monotone_structure(model):
        raise DomainError("certificate requires a monotone (all-positive-weight) model")
    noisy = report.noisy_train
    tau = report.tau
    if original is not None:
        if original.n != noisy.n:
            raise DomainError("original dataset size does not match the training set")
        X0 = original.X
    else:
        X0 = noisy.X + tau * noisy.y[:, None]
    preds = model.predict_batch(noisy.X)
    keep = np.nonzero(preds == noisy.y)[0]
    if keep.size == 0:
        return CertificateCheck(
            n_checked=0, radius=tau, fraction_violating=0.0, min_er=float("inf")
        )
    ers = np.array([er_risk_score(model, X0[i]) for i in keep])
    slack = 1e-9 * max(tau, 1.0)
    bad = ers < tau - slack
    return CertificateCheck(
        n_checked=int(keep.size),
        radius=tau,
        fraction_violating=float(np.mean(bad)),
        min_er=float(ers.min()),
    )
