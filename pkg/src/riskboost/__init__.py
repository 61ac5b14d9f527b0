"""riskboost: interpretable integer risk scores with exact l-inf robustness.

The library trains scorecard classifiers by boosting one-sided threshold
stumps on margin-shifted data, certifies adversarial radii exactly (for
risk scores and threshold trees), measures how separable a dataset is, and
ships the constructive counterexample generators behind those guarantees.
"""
from .boosting import (
    BbmState,
    PotentialGrid,
    TrainReport,
    bbm_distribution,
    bbm_potential,
    interpretation_complexity,
    train_bbm_rs,
)
from .dataset import (
    LabeledDataset,
    LabeledExample,
    WeightedDataset,
    apply_normalization,
    ingest_csv,
    make_dataset,
    normalize,
    split,
)
from .errors import (
    ConstructionError,
    ContractError,
    DomainError,
    EvalError,
    GenError,
    IngestError,
    InternalError,
    RiskboostError,
    SerdeError,
    SolverError,
    SplitError,
    TrainError,
)
from .harness import (
    CurvePoint,
    ExperimentConfig,
    EvalReport,
    RepeatResult,
    SweepReport,
    SweepRow,
    accuracy,
    cross_validate,
    ic_accuracy_curve,
    render_curve_csv,
    render_eval_csv,
    render_sweep_csv,
    run_experiment,
    tau_sweep,
)
from .models import (
    Condition,
    DecisionTree,
    Leaf,
    RiskScore,
    Split,
    Stump,
    leaf_boxes,
    merge_rounds,
    tree_depth,
    tree_size,
    validate_tree,
)
from .robustness import (
    CertificateCheck,
    RobustnessReport,
    certified_radius_check,
    empirical_robustness,
    er_risk_score,
    er_tree,
    exact_radius,
    is_monotone_structure,
)
from .separation import (
    SeparationReport,
    conflict_graph,
    linear_separateness,
    max_l1_margin,
    measure_separation,
    min_opposite_distance,
    r_separateness,
)
from .serde import deserialize_model, render_scorecard, serialize_model
from .stumps import best_stump, gen_linear_dataset
from .trees import (
    TreeTrainConfig,
    gen_parity,
    gen_staircase,
    grid_tree,
    parity_size_bound_check,
    train_cart,
)

__version__ = "0.1.0"

__all__ = [
    "BbmState",
    "CertificateCheck",
    "Condition",
    "ConstructionError",
    "ContractError",
    "CurvePoint",
    "DecisionTree",
    "DomainError",
    "EvalError",
    "EvalReport",
    "ExperimentConfig",
    "GenError",
    "IngestError",
    "InternalError",
    "LabeledDataset",
    "LabeledExample",
    "Leaf",
    "PotentialGrid",
    "RepeatResult",
    "RiskScore",
    "RiskboostError",
    "RobustnessReport",
    "SeparationReport",
    "SerdeError",
    "SolverError",
    "Split",
    "SplitError",
    "Stump",
    "SweepReport",
    "SweepRow",
    "TrainError",
    "TrainReport",
    "TreeTrainConfig",
    "WeightedDataset",
    "accuracy",
    "apply_normalization",
    "bbm_distribution",
    "bbm_potential",
    "best_stump",
    "certified_radius_check",
    "conflict_graph",
    "cross_validate",
    "deserialize_model",
    "empirical_robustness",
    "er_risk_score",
    "er_tree",
    "exact_radius",
    "gen_linear_dataset",
    "gen_parity",
    "gen_staircase",
    "grid_tree",
    "ic_accuracy_curve",
    "ingest_csv",
    "interpretation_complexity",
    "is_monotone_structure",
    "leaf_boxes",
    "linear_separateness",
    "make_dataset",
    "max_l1_margin",
    "measure_separation",
    "merge_rounds",
    "min_opposite_distance",
    "normalize",
    "parity_size_bound_check",
    "r_separateness",
    "render_curve_csv",
    "render_eval_csv",
    "render_scorecard",
    "render_sweep_csv",
    "run_experiment",
    "serialize_model",
    "split",
    "tau_sweep",
    "train_bbm_rs",
    "train_cart",
    "tree_depth",
    "tree_size",
    "validate_tree",
]
