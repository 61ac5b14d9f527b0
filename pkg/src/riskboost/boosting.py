"""Boost-by-majority over one-sided stumps, producing integer risk scores.

The booster weighs examples by the potential of a biased +-1 random walk:
Phi_t(s) is the probability that a walk started at margin s, taking one step
per remaining round (up with probability 1/2 + gamma), ends at or below 0.
An example's weight in round t is Phi_{t+1}(s-1) - Phi_{t+1}(s+1), the
probability mass for which this round's outcome is pivotal.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .dataset import LabeledDataset, WeightedDataset, make_dataset
from .errors import DomainError, InternalError, TrainError
from .models import DecisionTree, RiskScore, Stump, merge_rounds, tree_size
from .stumps import best_stump

_NEG_WEIGHT_TOL = 1e-12


class PotentialGrid:
    """All potentials Phi_t(s) for a fixed horizon T and edge gamma.

    Level t is an array over offsets s in [-(T+1), T+1]; the terminal level
    T+1 is the indicator of s <= 0 and earlier levels follow the recurrence
    Phi_t(s) = (1/2+gamma) Phi_{t+1}(s+1) + (1/2-gamma) Phi_{t+1}(s-1).
    """

    def __init__(self, T: int, gamma: float) -> None:
        if T < 1:
            raise DomainError(f"T must be >= 1, got {T}")
        if not 0.0 <= gamma < 0.5:
            raise DomainError(f"gamma must be in [0, 0.5), got {gamma}")
        self.T = T
        self.gamma = gamma
        p = 0.5 + gamma
        q = 0.5 - gamma
        width = 2 * T + 3  # offsets -(T+1) .. T+1
        s_vals = np.arange(-(T + 1), T + 2)
        levels = np.empty((T + 2, width), dtype=np.float64)
        levels[T + 1] = (s_vals <= 0).astype(np.float64)
        for t in range(T, 0, -1):
            nxt = levels[t + 1]
            cur = np.empty(width)
            cur[1:-1] = p * nxt[2:] + q * nxt[:-2]
            # from s = -(T+1) the walk cannot climb past -t < 0, and from
            # s = T+1 it cannot fall to 0, so the edges are exact constants
            cur[0] = 1.0
            cur[-1] = 0.0
            levels[t] = cur
        self._levels = levels

    def phi(self, t: int, s) -> np.ndarray | float:
        if not 1 <= t <= self.T + 1:
            raise DomainError(f"t must be in [1, T+1]=[1, {self.T + 1}], got {t}")
        s_arr = np.asarray(s)
        if np.any(np.abs(s_arr) > self.T + 1):
            raise DomainError(f"|s| must be <= T+1={self.T + 1}")
        out = self._levels[t][s_arr + self.T + 1]
        return float(out) if np.isscalar(s) else out

    def weight(self, t: int, s) -> np.ndarray | float:
        """Round-t example weight at margin s: Phi_{t+1}(s-1) - Phi_{t+1}(s+1).

        Mathematically nonnegative; floating-point dust down to -1e-12 is
        clamped to zero and anything more negative is an internal fault.
        """
        if not 1 <= t <= self.T:
            raise DomainError(f"t must be in [1, T]=[1, {self.T}], got {t}")
        s_arr = np.atleast_1d(np.asarray(s, dtype=np.int64))
        w = self.phi(t + 1, s_arr - 1) - self.phi(t + 1, s_arr + 1)
        w = np.atleast_1d(w)
        if np.any(w < -_NEG_WEIGHT_TOL):
            raise InternalError(
                f"potential weight {w.min()!r} below -1e-12 at t={t}"
            )
        w = np.maximum(w, 0.0)
        return float(w[0]) if np.isscalar(s) else w


@functools.lru_cache(maxsize=64)
def _grid(T: int, gamma: float) -> PotentialGrid:
    return PotentialGrid(T, gamma)


def bbm_potential(T: int, t: int, s: int, gamma: float) -> float:
    """Potential Phi_t(s) for horizon T and edge gamma.

    Equals the probability that a random walk with up-probability
    1/2 + gamma, taking T - t + 1 steps from s, ends at or below zero; the
    terminal level Phi_{T+1} is the indicator of s <= 0.
    """
    if abs(s) > T:
        raise DomainError(f"|s| must be <= T={T}, got {s}")
    return float(_grid(T, gamma).phi(t, int(s)))


@dataclass
class BbmState:
    """Booster state entering round t (1-indexed).

    margins[i] is y_i times the sum of the first t-1 stump outputs on
    example i, so |margins[i]| <= t - 1 and margins[i] has the parity of
    t - 1.
    """

    T: int
    t: int
    gamma_bbm: float
    margins: np.ndarray
    potential_table: PotentialGrid = field(repr=False)

    def __post_init__(self) -> None:
        if not 1 <= self.t <= self.T:
            raise DomainError(f"round t={self.t} outside [1, T={self.T}]")
        if not 0.0 < self.gamma_bbm < 0.5:
            raise DomainError(f"gamma_bbm must be in (0, 0.5), got {self.gamma_bbm}")
        m = np.asarray(self.margins, dtype=np.int64)
        if np.any(np.abs(m) > self.t - 1):
            raise DomainError(f"margin exceeds t-1={self.t - 1}")
        if np.any((m - (self.t - 1)) % 2 != 0):
            raise DomainError(f"margin parity must match t-1={self.t - 1}")
        self.margins = m


def bbm_distribution(state: BbmState) -> np.ndarray | None:
    """Normalized example weights for the current round, or None.

    Returns None when every example has zero weight (all walks already
    decided), which callers treat as an early-stop signal.
    """
    w = state.potential_table.weight(state.t, state.margins)
    total = float(w.sum())
    if total <= 0.0:
        return None
    return w / total


@dataclass(frozen=True)
class RoundLog:
    round: int
    feature: int
    theta: float
    weighted_accuracy: float
    advantage: float


@dataclass(frozen=True)
class TrainReport:
    model: RiskScore
    rounds_run: int
    stop_reason: str  # "reached_T" | "weak_learner_exhausted"
    round_log: tuple[RoundLog, ...]
    noisy_train: LabeledDataset
    T: int
    tau: float
    gamma_bbm: float


def train_bbm_rs(
    ds: LabeledDataset,
    T: int,
    tau: float,
    gamma_bbm: float = 0.01,
    seed: int = 0,
) -> TrainReport:
    """Boost one-sided stumps for up to T rounds on margin-shifted data.

    Each example (x, y) is replaced by (x - tau * y * 1, y) before training;
    afterwards any point the model classifies like its shifted twin is
    certifiably robust at radius tau (the model is nondecreasing, so the
    shifted twin is the worst point in the l-inf ball). Runs stop early when
    the best stump's weighted accuracy is <= 1/2 + gamma_bbm (at the default
    gamma_bbm = 0.01: accuracy <= 0.51) or when every example's weight is
    zero. The merged model carries one weight unit per round and bias
    -rounds_run / 2.

    `seed` is accepted for interface uniformity with the tree trainer; the
    procedure itself is deterministic.
    """
    del seed
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"tau must be in [0, 1), got {tau}")
    if not 0.0 < gamma_bbm < 0.5:
        raise DomainError(f"gamma_bbm must be in (0, 0.5), got {gamma_bbm}")
    if ds.X.min() < -1e-9 or ds.X.max() > 1.0 + 1e-9:
        j = int(np.unravel_index(np.argmax(np.abs(ds.X - 0.5)), ds.X.shape)[1])
        raise TrainError(
            f"features must lie in [0, 1] (normalize first); column {j} has range "
            f"[{ds.X[:, j].min():g}, {ds.X[:, j].max():g}]"
        )

    noisy_X = ds.X - tau * ds.y[:, None].astype(np.float64)
    noisy = make_dataset(noisy_X, ds.y, feature_names=ds.feature_names)
    grid = _grid(T, gamma_bbm)

    margins = np.zeros(ds.n, dtype=np.int64)
    stumps: list[Stump] = []
    log: list[RoundLog] = []
    stop_reason = "reached_T"
    for t in range(1, T + 1):
        state = BbmState(
            T=T, t=t, gamma_bbm=gamma_bbm, margins=margins, potential_table=grid
        )
        mu = bbm_distribution(state)
        if mu is None:
            stop_reason = "weak_learner_exhausted"
            break
        result = best_stump(WeightedDataset(base=noisy, mu=mu))
        if result.weighted_accuracy <= 0.5 + gamma_bbm:
            stop_reason = "weak_learner_exhausted"
            break
        stumps.append(result.stump)
        log.append(
            RoundLog(
                round=t,
                feature=result.stump.feature,
                theta=result.stump.theta,
                weighted_accuracy=result.weighted_accuracy,
                advantage=result.advantage,
            )
        )
        margins = margins + ds.y * result.stump.predict_batch(noisy_X)

    model = merge_rounds(stumps, rounds_run=len(stumps))
    return TrainReport(
        model=model,
        rounds_run=len(stumps),
        stop_reason=stop_reason,
        round_log=tuple(log),
        noisy_train=noisy,
        T=T,
        tau=tau,
        gamma_bbm=gamma_bbm,
    )


def interpretation_complexity(model) -> int:
    """Condition count of a risk score (bias excluded) or split count of a tree."""
    if isinstance(model, RiskScore):
        return sum(1 for c in model.conditions if c.weight != 0)
    if isinstance(model, DecisionTree):
        return tree_size(model)
    raise DomainError(f"no complexity measure for {type(model).__name__}")


def render_round_log(report: TrainReport) -> str:
    """Round log as a CSV text table."""
    lines = ["round,feature,theta,weighted_accuracy,advantage"]
    for r in report.round_log:
        lines.append(
            f"{r.round},{r.feature},{format(r.theta, '.17g')},"
            f"{format(r.weighted_accuracy, '.17g')},{format(r.advantage, '.17g')}"
        )
    return "\n".join(lines) + "\n"
