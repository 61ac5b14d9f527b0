"""Experiment protocol: repeated splits, cross-validated rounds, sweeps.

Everything here is deterministic given the top-level seed. Per-repeat seeds
are derived through SeedSequence so that changing the number of repeats
never perturbs earlier repeats, and rendered tables carry no timestamps:
rerunning a configuration reproduces the output byte for byte.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .boosting import interpretation_complexity, train_bbm_rs
from .dataset import LabeledDataset, apply_normalization, normalize, split
from .errors import DomainError
from .robustness import certified_radius_check, empirical_robustness

DEFAULT_T_GRID = (5, 10, 15, 20, 25, 30)


def accuracy(model, ds: LabeledDataset) -> float:
    return float(np.mean(model.predict_batch(ds.X) == ds.y))


def _mean_stderr(values) -> tuple[float, float]:
    v = np.asarray(values, dtype=np.float64)
    if len(v) == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(len(v)))


@dataclass(frozen=True)
class ExperimentConfig:
    """Knobs for one evaluation run.

    strict_no_leak
        When False (the default) normalization statistics are fit on the
        whole dataset before splitting, which leaks the held-out range into
        training. When True the statistics come from the training side only
        and are applied unchanged to the test side, whose values may then
        fall outside [0, 1].
    clip
        Confine adversarial perturbations to the [0, 1] box when measuring
        exact radii.
    """

    tau: float = 0.05
    gamma_bbm: float = 0.01
    T_grid: tuple[int, ...] = DEFAULT_T_GRID
    train_fraction: float = 2.0 / 3.0
    repeats: int = 5
    folds: int = 5
    k: int = 100
    seed: int = 0
    strict_no_leak: bool = False
    clip: bool = False

    def __post_init__(self) -> None:
        if len(self.T_grid) == 0 or any(T < 1 for T in self.T_grid):
            raise DomainError(f"T_grid must be nonempty positive ints, got {self.T_grid}")
        object.__setattr__(self, "T_grid", tuple(sorted(self.T_grid)))
        if self.repeats < 1:
            raise DomainError(f"repeats must be >= 1, got {self.repeats}")
        if self.folds < 2:
            raise DomainError(f"folds must be >= 2, got {self.folds}")
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")


def _derived_seeds(seed: int, repeat: int) -> np.ndarray:
    # stable per-(seed, repeat) stream: [split, cv folds, er sampling]
    return np.random.SeedSequence([seed, repeat]).generate_state(3)


def cross_validate(
    ds: LabeledDataset,
    T_grid,
    folds: int,
    tau: float,
    gamma_bbm: float,
    seed: int,
):
    """Pick the round budget by k-fold validation accuracy.

    All grid entries see the same folds. Ties go to the smallest budget.
    Returns (best_T, mean_accuracy_per_T aligned with sorted T_grid).
    """
    T_grid = tuple(sorted(T_grid))
    if ds.n < folds:
        raise DomainError(f"cannot make {folds} folds from {ds.n} examples")
    rng = np.random.default_rng(seed)
    assignment = np.array_split(rng.permutation(ds.n), folds)
    means = []
    fold_sets = []
    for held in assignment:
        held = np.sort(held)
        mask = np.ones(ds.n, dtype=bool)
        mask[held] = False
        tr = ds.subset(np.nonzero(mask)[0])
        va = ds.subset(held)
        if len(np.unique(tr.y)) < 2:
            warnings.warn(
                "a training fold contains a single class; its models are constant",
                stacklevel=2,
            )
        fold_sets.append((tr, va))
    for T in T_grid:
        accs = [
            accuracy(train_bbm_rs(tr, T=T, tau=tau, gamma_bbm=gamma_bbm).model, va)
            for tr, va in fold_sets
        ]
        means.append(float(np.mean(accs)))
    best_T = T_grid[int(np.argmax(means))]
    return best_T, tuple(means)


@dataclass(frozen=True)
class RepeatResult:
    repeat: int
    best_T: int
    rounds_run: int
    stop_reason: str
    train_accuracy: float
    test_accuracy: float
    ic: int
    mean_er: float
    median_er: float
    astuteness: float
    cert_fraction_violating: float
    cert_n: int


@dataclass(frozen=True)
class EvalReport:
    config: ExperimentConfig
    rows: tuple[RepeatResult, ...]

    def summary(self) -> dict[str, tuple[float, float]]:
        """(mean, standard error) per metric across repeats."""
        out = {}
        for name in (
            "best_T",
            "rounds_run",
            "train_accuracy",
            "test_accuracy",
            "ic",
            "mean_er",
            "median_er",
            "astuteness",
            "cert_fraction_violating",
        ):
            out[name] = _mean_stderr([getattr(r, name) for r in self.rows])
        return out


def run_experiment(ds: LabeledDataset, config: ExperimentConfig) -> EvalReport:
    """Repeated-split evaluation of the boosted scorecard.

    Each repeat: split, cross-validate the round budget on the training
    side, train at the chosen budget, then measure accuracy, complexity,
    exact radii on sampled test points (astuteness judged at radius tau),
    and the training-set certificate.
    """
    if config.strict_no_leak:
        base = ds
    else:
        base, _ = normalize(ds)
    clip = (0.0, 1.0) if config.clip else None
    rows = []
    for rep in range(config.repeats):
        s_split, s_cv, s_er = (int(v) for v in _derived_seeds(config.seed, rep))
        train, test = split(base, config.train_fraction, seed=s_split)
        if config.strict_no_leak:
            train, stats = normalize(train)
            test = apply_normalization(test, stats)
        best_T, _ = cross_validate(
            train,
            config.T_grid,
            folds=config.folds,
            tau=config.tau,
            gamma_bbm=config.gamma_bbm,
            seed=s_cv,
        )
        report = train_bbm_rs(
            train, T=best_T, tau=config.tau, gamma_bbm=config.gamma_bbm
        )
        rob = empirical_robustness(
            report.model,
            test,
            radius=config.tau,
            k=config.k,
            seed=s_er,
            clip=clip,
        )
        cert = certified_radius_check(report, original=train)
        rows.append(
            RepeatResult(
                repeat=rep,
                best_T=best_T,
                rounds_run=report.rounds_run,
                stop_reason=report.stop_reason,
                train_accuracy=accuracy(report.model, train),
                test_accuracy=accuracy(report.model, test),
                ic=interpretation_complexity(report.model),
                mean_er=rob.mean_er,
                median_er=rob.median_er,
                astuteness=rob.astuteness,
                cert_fraction_violating=cert.fraction_violating,
                cert_n=cert.n_checked,
            )
        )
    return EvalReport(config=config, rows=tuple(rows))


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


_EVAL_COLUMNS = (
    "repeat",
    "best_T",
    "rounds_run",
    "stop_reason",
    "train_accuracy",
    "test_accuracy",
    "ic",
    "mean_er",
    "median_er",
    "astuteness",
    "cert_fraction_violating",
    "cert_n",
    "robdt_ref",
    "lcpa_ref",
)


def render_eval_csv(report: EvalReport) -> str:
    """Delimited per-repeat table plus mean / stderr rows.

    The trailing robdt_ref and lcpa_ref columns are intentionally empty
    slots where externally produced baseline numbers can be pasted when
    comparing against other robust-tree or scorecard solvers.
    """
    lines = [",".join(_EVAL_COLUMNS)]
    for r in report.rows:
        vals = [
            _fmt(getattr(r, c)) if not c.endswith("_ref") else "" for c in _EVAL_COLUMNS
        ]
        lines.append(",".join(vals))
    summ = report.summary()
    for kind in ("mean", "stderr"):
        vals = [kind]
        for c in _EVAL_COLUMNS[1:]:
            if c in summ:
                m, se = summ[c]
                vals.append(_fmt(m if kind == "mean" else se))
            else:
                vals.append("")
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepRow:
    tau: float
    report: EvalReport


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]


def tau_sweep(ds: LabeledDataset, taus, config: ExperimentConfig) -> SweepReport:
    """Run the full experiment at each tau (config.tau is ignored)."""
    taus = tuple(float(t) for t in taus)
    if len(taus) == 0:
        raise DomainError("tau sweep needs at least one tau")
    rows = tuple(
        SweepRow(tau=t, report=run_experiment(ds, replace(config, tau=t)))
        for t in taus
    )
    return SweepReport(rows=rows)


_SWEEP_COLUMNS = (
    "tau",
    "test_accuracy_mean",
    "test_accuracy_stderr",
    "ic_mean",
    "ic_stderr",
    "mean_er_mean",
    "mean_er_stderr",
    "median_er_mean",
    "astuteness_mean",
    "astuteness_stderr",
    "cert_fraction_violating_mean",
)


def render_sweep_csv(sweep: SweepReport) -> str:
    lines = [",".join(_SWEEP_COLUMNS)]
    for row in sweep.rows:
        s = row.report.summary()
        lines.append(
            ",".join(
                [
                    _fmt(row.tau),
                    _fmt(s["test_accuracy"][0]),
                    _fmt(s["test_accuracy"][1]),
                    _fmt(s["ic"][0]),
                    _fmt(s["ic"][1]),
                    _fmt(s["mean_er"][0]),
                    _fmt(s["mean_er"][1]),
                    _fmt(s["median_er"][0]),
                    _fmt(s["astuteness"][0]),
                    _fmt(s["astuteness"][1]),
                    _fmt(s["cert_fraction_violating"][0]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CurvePoint:
    T: int
    mean_ic: float
    mean_accuracy: float
    stderr_accuracy: float


def ic_accuracy_curve(ds: LabeledDataset, config: ExperimentConfig):
    """Accuracy as a function of the round budget, without cross-validation.

    Returns (points, frontier): one point per budget in config.T_grid, and
    the Pareto frontier over (complexity, accuracy), i.e. the points no
    other point beats on both axes.
    """
    if config.strict_no_leak:
        base = ds
    else:
        base, _ = normalize(ds)
    points = []
    for T in config.T_grid:
        ics, accs = [], []
        for rep in range(config.repeats):
            s_split, _, _ = (int(v) for v in _derived_seeds(config.seed, rep))
            train, test = split(base, config.train_fraction, seed=s_split)
            if config.strict_no_leak:
                train, stats = normalize(train)
                test = apply_normalization(test, stats)
            report = train_bbm_rs(
                train, T=T, tau=config.tau, gamma_bbm=config.gamma_bbm
            )
            ics.append(interpretation_complexity(report.model))
            accs.append(accuracy(report.model, test))
        am, ase = _mean_stderr(accs)
        points.append(
            CurvePoint(
                T=T, mean_ic=float(np.mean(ics)), mean_accuracy=am, stderr_accuracy=ase
            )
        )
    frontier = tuple(
        p
        for p in points
        if not any(
            (q.mean_ic <= p.mean_ic and q.mean_accuracy > p.mean_accuracy)
            or (q.mean_ic < p.mean_ic and q.mean_accuracy >= p.mean_accuracy)
            for q in points
        )
    )
    return tuple(points), frontier


_CURVE_COLUMNS = ("T", "mean_ic", "mean_accuracy", "stderr_accuracy")


def render_curve_csv(points) -> str:
    lines = [",".join(_CURVE_COLUMNS)]
    for p in points:
        lines.append(
            ",".join(
                [_fmt(p.T), _fmt(p.mean_ic), _fmt(p.mean_accuracy), _fmt(p.stderr_accuracy)]
            )
        )
    return "\n".join(lines) + "\n"
