"""Weak learner: exact search over one-sided decision stumps."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import LabeledDataset, WeightedDataset, make_dataset
from .errors import DomainError, GenError, SearchError
from .models import Stump


@dataclass(frozen=True)
class StumpSearchResult:
    stump: Stump
    weighted_accuracy: float
    advantage: float


def best_stump(wds: WeightedDataset) -> StumpSearchResult:
    """Exact argmax of mu-weighted accuracy over all one-sided stumps.

    Candidate thresholds per feature are the midpoints between consecutive
    distinct values, plus one value below the minimum (the constant +1
    hypothesis) and one above the maximum (constant -1). Only examples with
    mu > 0 contribute candidates or accuracy mass. Ties break toward higher
    accuracy, then the smaller feature index, then the smaller threshold.

    One sorted sweep per feature: with examples ordered by the feature value,
    the accuracy of the threshold just above position k is
    W_pos - sum_{j<=k} mu_j y_j, so a cumulative sum scores every candidate.
    """
    ds, mu = wds.base, wds.mu
    if ds.n == 0:
        raise SearchError("cannot search an empty dataset")
    # zero-weight rows add exact 0.0 to every sum, so masking them changes
    # only the candidate set, never a score
    live = mu > 0.0
    Xs = ds.X[live]
    contrib_all = mu[live] * ds.y[live]
    w_pos = float(np.sum(mu[ds.y == 1]))

    best_acc = -np.inf
    best_feature = -1
    best_theta = 0.0
    for f in range(ds.d):
        v = Xs[:, f]
        order = np.argsort(v, kind="stable")
        vv = v[order]
        prefix = np.cumsum(contrib_all[order])
        cut = np.nonzero(vv[1:] > vv[:-1])[0]
        accs = np.concatenate(([w_pos], w_pos - prefix[cut], [w_pos - prefix[-1]]))
        thetas = np.concatenate(
            ([vv[0] - 1.0], (vv[cut] + vv[cut + 1]) / 2.0, [vv[-1] + 1.0])
        )
        top = float(accs.max())
        if top > best_acc:
            best_acc = top
            best_feature = f
            best_theta = float(thetas[accs == top].min())
    return StumpSearchResult(
        stump=Stump(feature=best_feature, theta=best_theta),
        weighted_accuracy=best_acc,
        advantage=best_acc - 0.5,
    )


_DOMAINS = {"[-1,1]": (-1.0, 1.0), "[0,1]": (0.0, 1.0)}


def gen_linear_dataset(d: int, gamma: float, n: int, seed: int, domain: str = "[-1,1]"):
    """Sample an n-point dataset that is gamma-separable by a random w >= 0.

    w is drawn from the flat Dirichlet (so ||w||_1 = 1 and w_i >= 0), points
    are uniform over the domain cube, and each point is labeled by the sign
    of w . (x - m) where m is the domain midpoint; points with
    |w . (x - m)| < gamma are rejected. On [-1,1] the midpoint is 0 and the
    rule is exactly y = sign(w . x); on [0,1] the homogeneous rule with
    nonnegative w would label everything +1, so the centered threshold is
    what keeps both classes populated there.

    Returns (dataset, w). Construction invariant: every returned point
    satisfies y * (w . (x - m)) >= gamma under the same matrix product the
    caller would write.
    """
    if domain not in _DOMAINS:
        raise DomainError(f"domain must be one of {sorted(_DOMAINS)}, got {domain!r}")
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0.0 <= gamma < 1.0:
        raise DomainError(f"gamma must be in [0, 1), got {gamma}")
    lo, hi = _DOMAINS[domain]
    mid = (lo + hi) / 2.0
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(d))

    taken_X: list[np.ndarray] = []
    taken_y: list[np.ndarray] = []
    total = accepted = 0
    while True:
        batch = max(4 * n, 1024)
        Xb = rng.uniform(lo, hi, size=(batch, d))
        margins = (Xb - mid) @ w
        keep = np.abs(margins) >= gamma
        total += batch
        accepted += int(keep.sum())
        taken_X.append(Xb[keep])
        taken_y.append(np.where(margins[keep] > 0, 1, -1))
        if total >= 50_000 and accepted / total < 1e-4:
            raise GenError(
                f"rejection acceptance rate {accepted / total:.2e} below 1e-4 "
                f"(gamma={gamma}, d={d})"
            )
        have = sum(len(a) for a in taken_X)
        if have >= n:
            X = np.concatenate(taken_X)[:n]
            y = np.concatenate(taken_y)[:n]
            # re-filter with the assembled matmul so the invariant holds for
            # exactly the arithmetic a caller will reproduce
            m2 = (X - mid) @ w
            ok = (y * m2 >= gamma) & (np.where(m2 > 0, 1, -1) == y)
            if np.all(ok):
                ds = make_dataset(
                    X, y, domain=tuple((lo, hi) for _ in range(d))
                )
                return ds, w
            taken_X = [X[ok]]
            taken_y = [y[ok]]
