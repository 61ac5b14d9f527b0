"""Command line interface.

Subcommands: ingest, separate, train, eval, robustness, sweep, theory,
report. Commands that write artifacts take --out-dir and drop a
manifest.json with a sha256 per file; nothing written carries a timestamp,
so identical inputs and flags reproduce identical bytes. The report command
additionally renders figures next to the delimited tables.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .boosting import interpretation_complexity, render_round_log, train_bbm_rs
from .dataset import LabeledDataset, ingest_csv, make_dataset, normalize, split
from .errors import RiskboostError
from .harness import (
    ExperimentConfig,
    accuracy,
    ic_accuracy_curve,
    render_curve_csv,
    render_eval_csv,
    render_sweep_csv,
    run_experiment,
    tau_sweep,
)
from .robustness import empirical_robustness
from .separation import max_l1_margin, measure_separation
from .serde import deserialize_model, render_scorecard, serialize_model
from .stumps import gen_linear_dataset
from .trees import (
    TreeTrainConfig,
    gen_parity,
    gen_staircase,
    grid_tree,
    parity_size_bound_check,
    train_cart,
)
from .models import tree_depth, tree_size


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _save_dataset(ds: LabeledDataset, path: Path) -> None:
    np.savez(
        path,
        X=ds.X,
        y=ds.y,
        feature_names=np.array(ds.feature_names, dtype=np.str_),
        domain=np.array(ds.domain, dtype=np.float64),
    )


def _load_dataset(path: str, label_column, positive_value) -> LabeledDataset:
    p = Path(path)
    if p.suffix == ".npz":
        with np.load(p, allow_pickle=False) as z:
            return make_dataset(
                z["X"],
                z["y"],
                feature_names=[str(s) for s in z["feature_names"]],
                domain=[(float(a), float(b)) for a, b in z["domain"]],
            )
    if label_column is None or positive_value is None:
        raise RiskboostError(
            "CSV input needs --label-column and --positive-value "
            "(or ingest it to .npz first)"
        )
    return ingest_csv(p, label_column=label_column, positive_value=positive_value)


def _write_outputs(out_dir: Path, files: dict[str, str | bytes], config: dict) -> None:
    """Write the named files plus a manifest of their digests."""
    out_dir.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name, content in sorted(files.items()):
        path = out_dir / name
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content)
        digests[name] = hashlib.sha256(path.read_bytes()).hexdigest()
    manifest = {"tool": f"riskboost {__version__}", "config": config, "files": digests}
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n"
    )


def _int_list(text: str):
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {text!r}")


def _float_list(text: str):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated floats, got {text!r}")


def _config_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        tau=args.tau,
        gamma_bbm=args.gamma_bbm,
        T_grid=args.grid,
        train_fraction=args.train_fraction,
        repeats=args.repeats,
        folds=args.folds,
        k=args.k,
        seed=args.seed,
        strict_no_leak=args.strict_no_leak,
        clip=args.clip,
    )


def cmd_ingest(args) -> int:
    ds = ingest_csv(
        Path(args.data), label_column=args.label_column, positive_value=args.positive_value
    )
    _save_dataset(ds, Path(args.out))
    print(
        f"ingested n={ds.n} d={ds.d} positive_fraction={np.mean(ds.y == 1):.4f} "
        f"-> {args.out}"
    )
    return 0


def cmd_separate(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    if not args.raw:
        ds, _ = normalize(ds)
    rep = measure_separation(ds, r=args.r)
    cols = (
        ("n", rep.n),
        ("d", rep.d),
        ("n_binary_features", rep.n_binary_features),
        ("positive_fraction", rep.positive_fraction),
        ("r", rep.r),
        ("r_separateness", rep.r_separateness),
        ("n_removed_r", len(rep.removed_r)),
        ("min_opposite_distance_after", rep.min_opposite_distance_after),
        ("linear_separateness", rep.linear_separateness),
        ("n_removed_linear", len(rep.removed_linear)),
        ("linear_C", rep.linear_C),
        ("gamma", rep.gamma),
    )
    for name, value in cols:
        print(f"{name}={_fmt(value)}")
    if args.out_dir:
        csv_text = (
            ",".join(name for name, _ in cols)
            + "\n"
            + ",".join(_fmt(v) for _, v in cols)
            + "\n"
        )
        _write_outputs(
            Path(args.out_dir),
            {"separation.csv": csv_text},
            {"command": "separate", "r": args.r, "raw": bool(args.raw)},
        )
    return 0


def cmd_train(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    ds, _ = normalize(ds)
    report = train_bbm_rs(ds, T=args.T, tau=args.tau, gamma_bbm=args.gamma_bbm)
    acc = accuracy(report.model, ds)
    ic = interpretation_complexity(report.model)
    print(
        f"rounds_run={report.rounds_run} stop_reason={report.stop_reason} "
        f"train_accuracy={acc:.4f} conditions={ic}"
    )
    print(render_scorecard(report.model, feature_names=list(ds.feature_names)))
    if args.out_dir:
        _write_outputs(
            Path(args.out_dir),
            {
                "model.txt": serialize_model(report.model),
                "scorecard.txt": render_scorecard(
                    report.model, feature_names=list(ds.feature_names)
                ),
                "rounds.csv": render_round_log(report),
            },
            {
                "command": "train",
                "T": args.T,
                "tau": args.tau,
                "gamma_bbm": args.gamma_bbm,
            },
        )
    return 0


def cmd_eval(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    config = _config_from_args(args)
    report = run_experiment(ds, config)
    text = render_eval_csv(report)
    print(text, end="")
    if args.out_dir:
        _write_outputs(
            Path(args.out_dir),
            {"eval.csv": text},
            {"command": "eval", **_config_dict(config)},
        )
    return 0


def cmd_robustness(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    ds, _ = normalize(ds)
    model = deserialize_model(Path(args.model).read_text())
    radius = args.radius if args.radius is not None else args.tau
    rob = empirical_robustness(
        model,
        ds,
        radius=radius,
        k=args.k,
        seed=args.seed,
        clip=(0.0, 1.0) if args.clip else None,
    )
    print(
        f"n_sampled={rob.n_sampled} accuracy={rob.accuracy:.4f} "
        f"astuteness={rob.astuteness:.4f} mean_er={rob.mean_er:.6g} "
        f"median_er={rob.median_er:.6g} radius={radius:g}"
    )
    if args.out_dir:
        lines = ["index,er,correct"]
        preds = model.predict_batch(ds.X[rob.indices])
        for i, idx in enumerate(rob.indices):
            lines.append(
                f"{int(idx)},{_fmt(rob.ers[i])},{int(preds[i] == ds.y[idx])}"
            )
        _write_outputs(
            Path(args.out_dir),
            {"robustness.csv": "\n".join(lines) + "\n"},
            {
                "command": "robustness",
                "model": str(args.model),
                "radius": radius,
                "k": args.k,
                "seed": args.seed,
                "clip": bool(args.clip),
            },
        )
    return 0


def cmd_sweep(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    config = _config_from_args(args)
    sweep = tau_sweep(ds, args.taus, config)
    text = render_sweep_csv(sweep)
    print(text, end="")
    if args.out_dir:
        _write_outputs(
            Path(args.out_dir),
            {"sweep.csv": text},
            {"command": "sweep", "taus": list(args.taus), **_config_dict(config)},
        )
    return 0


def cmd_theory(args) -> int:
    """Constructive checks of the separation statements, at desk scale."""
    failures = 0
    rows = [("check", "value", "bound", "ok")]

    def record(name: str, value, bound, ok: bool) -> None:
        nonlocal failures
        rows.append((name, _fmt(value), _fmt(bound), str(int(ok))))
        print(f"[{'OK' if ok else 'FAIL'}] {name}: value={_fmt(value)} bound={_fmt(bound)}")
        if not ok:
            failures += 1

    d = args.d
    parity = gen_parity(d)
    ptree = grid_tree(parity, 1.0)
    err = 1.0 - accuracy(ptree, parity)
    record("parity_grid_tree_error", err, 0.0, err == 0.0)
    record(
        "parity_grid_tree_depth", tree_depth(ptree), 6 * d, tree_depth(ptree) <= 6 * d
    )
    for depth in range(1, d):
        cart = train_cart(parity, TreeTrainConfig(max_depth=depth))
        acc, ok = parity_size_bound_check(cart, d)
        record(f"parity_cart_depth{depth}_accuracy_bound", acc, 0.5 + (tree_size(cart) + 1) / 2 ** (d + 1), ok)

    stair = gen_staircase(args.n, args.eps)
    gamma, _ = max_l1_margin(stair)
    record("staircase_l1_margin", gamma, args.eps / 2, gamma >= args.eps / 2 - 1e-9)
    cart = train_cart(stair, TreeTrainConfig(max_depth=args.stair_depth))
    s = tree_size(cart)
    bound = 0.5 + 4.0 * s / stair.n
    acc = accuracy(cart, stair)
    record("staircase_cart_accuracy", acc, bound, acc <= bound + 1e-12)

    sep_ds, _ = gen_linear_dataset(d=2, gamma=args.r, n=args.n, seed=args.seed)
    gtree = grid_tree(sep_ds, args.r)
    err = 1.0 - accuracy(gtree, sep_ds)
    record("separated_grid_tree_error", err, 0.0, err == 0.0)
    depth_bound = int(np.ceil(6 * 2 / args.r))
    record(
        "separated_grid_tree_depth",
        tree_depth(gtree),
        depth_bound,
        tree_depth(gtree) <= depth_bound,
    )

    if args.out_dir:
        text = "\n".join(",".join(row) for row in rows) + "\n"
        _write_outputs(
            Path(args.out_dir),
            {"theory.csv": text},
            {
                "command": "theory",
                "d": d,
                "n": args.n,
                "eps": args.eps,
                "r": args.r,
                "seed": args.seed,
            },
        )
    return 1 if failures else 0


def cmd_report(args) -> int:
    ds = _load_dataset(args.data, args.label_column, args.positive_value)
    config = _config_from_args(args)
    out_dir = Path(args.out_dir)

    norm, _ = normalize(ds)
    sep = measure_separation(norm, r=args.r)
    sep_cols = (
        ("n", sep.n),
        ("d", sep.d),
        ("n_binary_features", sep.n_binary_features),
        ("positive_fraction", sep.positive_fraction),
        ("r", sep.r),
        ("r_separateness", sep.r_separateness),
        ("min_opposite_distance_after", sep.min_opposite_distance_after),
        ("linear_separateness", sep.linear_separateness),
        ("gamma", sep.gamma),
    )
    sep_csv = (
        ",".join(n for n, _ in sep_cols)
        + "\n"
        + ",".join(_fmt(v) for _, v in sep_cols)
        + "\n"
    )

    eval_report = run_experiment(ds, config)
    sweep = tau_sweep(ds, args.taus, config)
    points, _frontier = ic_accuracy_curve(ds, config)

    # one concrete model for the per-model figures
    train, test = split(norm, config.train_fraction, seed=config.seed)
    trained = train_bbm_rs(train, T=max(config.T_grid), tau=config.tau,
                           gamma_bbm=config.gamma_bbm)
    rob = empirical_robustness(
        trained.model, test, radius=config.tau, k=config.k, seed=config.seed,
        clip=(0.0, 1.0) if config.clip else None,
    )

    from .plots import plot_advantage, plot_curve, plot_er_histogram, plot_tradeoff

    out_dir.mkdir(parents=True, exist_ok=True)
    plot_tradeoff(sweep, out_dir / "tradeoff.png")
    plot_curve(points, out_dir / "curve.png")
    plot_er_histogram(rob, out_dir / "er_hist.png")
    plot_advantage(trained, out_dir / "advantage.png")

    files = {
        "separation.csv": sep_csv,
        "eval.csv": render_eval_csv(eval_report),
        "sweep.csv": render_sweep_csv(sweep),
        "curve.csv": render_curve_csv(points),
        "model.txt": serialize_model(trained.model),
        "scorecard.txt": render_scorecard(
            trained.model, feature_names=list(train.feature_names)
        ),
        "tradeoff.png": (out_dir / "tradeoff.png").read_bytes(),
        "curve.png": (out_dir / "curve.png").read_bytes(),
        "er_hist.png": (out_dir / "er_hist.png").read_bytes(),
        "advantage.png": (out_dir / "advantage.png").read_bytes(),
    }
    _write_outputs(
        out_dir,
        files,
        {"command": "report", "r": args.r, "taus": list(args.taus), **_config_dict(config)},
    )
    summ = eval_report.summary()
    print(f"report written to {out_dir}")
    print(
        f"test_accuracy={summ['test_accuracy'][0]:.4f}+-{summ['test_accuracy'][1]:.4f} "
        f"ic={summ['ic'][0]:.1f} mean_er={summ['mean_er'][0]:.4g} "
        f"astuteness={summ['astuteness'][0]:.4f}"
    )
    return 0


def _config_dict(config: ExperimentConfig) -> dict:
    return {
        "tau": config.tau,
        "gamma_bbm": config.gamma_bbm,
        "T_grid": list(config.T_grid),
        "train_fraction": config.train_fraction,
        "repeats": config.repeats,
        "folds": config.folds,
        "k": config.k,
        "seed": config.seed,
        "strict_no_leak": config.strict_no_leak,
        "clip": config.clip,
    }


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("data", help="dataset path (.npz from ingest, or .csv)")
    p.add_argument("--label-column", default=None)
    p.add_argument("--positive-value", default=None)


def _add_eval_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--gamma-bbm", type=float, default=0.01)
    p.add_argument("--grid", type=_int_list, default=(5, 10, 15, 20, 25, 30),
                   help="comma-separated round budgets for cross-validation")
    p.add_argument("--train-fraction", type=float, default=2.0 / 3.0)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--k", type=int, default=100, help="points sampled for exact radii")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clip", action="store_true",
                   help="confine perturbations to the [0,1] box")
    p.add_argument("--strict-no-leak", action="store_true",
                   help="fit normalization on the training side only")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="riskboost",
        description="interpretable risk scores with exact robustness radii",
    )
    parser.add_argument("--version", action="version", version=f"riskboost {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse a CSV into a canonical .npz dataset")
    p.add_argument("data")
    p.add_argument("--label-column", required=True)
    p.add_argument("--positive-value", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("separate", help="measure r- and linear separateness")
    _add_data_args(p)
    p.add_argument("--r", type=float, default=1e-5)
    p.add_argument("--raw", action="store_true", help="skip min-max normalization")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("train", help="train one model on the full dataset")
    _add_data_args(p)
    p.add_argument("--T", type=int, required=True, help="round budget")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--gamma-bbm", type=float, default=0.01)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="repeated-split evaluation with CV round budget")
    _add_data_args(p)
    _add_eval_args(p)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("robustness", help="exact radii for a saved model")
    _add_data_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--radius", type=float, default=None,
                   help="astuteness radius (defaults to --tau)")
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clip", action="store_true")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("sweep", help="full evaluation at each tau")
    _add_data_args(p)
    _add_eval_args(p)
    p.add_argument("--taus", type=_float_list, default=(0.0, 0.05, 0.1, 0.25))
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("theory", help="constructive checks of the separation results")
    p.add_argument("--d", type=int, default=4, help="parity dimension")
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--eps", type=float, default=0.2, help="staircase step margin")
    p.add_argument("--stair-depth", type=int, default=3)
    p.add_argument("--r", type=float, default=0.25, help="separation scale")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("report", help="tables plus rendered figures in one directory")
    _add_data_args(p)
    _add_eval_args(p)
    p.add_argument("--taus", type=_float_list, default=(0.0, 0.05, 0.1, 0.25))
    p.add_argument("--r", type=float, default=1e-5)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RiskboostError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
