"""Canonical text serialization for models, plus scorecard rendering.

The document format is line-based and versioned. Floats are written with 17
significant digits, which round-trips every IEEE double exactly, so
serialize -> deserialize is the identity on valid models.

Risk score document::

    riskboost-model 1
    type risk_score
    bias2 -3
    conditions 2
    condition 0 0.5 1
    condition 2 0.25 2

Decision tree document (preorder; `split f theta` is followed by its left
subtree then its right subtree)::

    riskboost-model 1
    type decision_tree
    features 2
    split 0 0.5
    leaf -1
    leaf 1
"""
from __future__ import annotations

from .errors import SerdeError
from .models import Condition, DecisionTree, Leaf, Node, RiskScore, Split, validate_tree

SCHEMA_VERSION = 1
MAGIC = "riskboost-model"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def serialize_model(model) -> str:
    """Render a RiskScore or DecisionTree as its canonical text document.

    Risk score conditions are emitted sorted by (feature, theta) regardless
    of in-memory order, so documents are canonical: equal models serialize
    to byte-identical text.
    """
    lines = [f"{MAGIC} {SCHEMA_VERSION}"]
    if isinstance(model, RiskScore):
        lines.append("type risk_score")
        lines.append(f"bias2 {model.bias2}")
        conds = sorted(model.conditions, key=lambda c: (c.feature, c.theta))
        lines.append(f"conditions {len(conds)}")
        for c in conds:
            lines.append(f"condition {c.feature} {_fmt(c.theta)} {c.weight}")
    elif isinstance(model, DecisionTree):
        lines.append("type decision_tree")
        lines.append(f"features {model.n_features}")
        _emit(model.root, lines)
    else:
        raise SerdeError(f"cannot serialize object of type {type(model).__name__}")
    return "\n".join(lines) + "\n"


def _emit(node: Node, lines: list[str]) -> None:
    if isinstance(node, Leaf):
        lines.append(f"leaf {node.label}")
    else:
        lines.append(f"split {node.feature} {_fmt(node.theta)}")
        _emit(node.left, lines)
        _emit(node.right, lines)


def deserialize_model(text: str):
    """Parse a canonical model document; inverse of `serialize_model`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SerdeError("empty model document")
    head = lines[0].split()
    if len(head) != 2 or head[0] != MAGIC:
        raise SerdeError(f"line 1: expected {MAGIC!r} header, got {lines[0]!r}")
    if head[1] != str(SCHEMA_VERSION):
        raise SerdeError(f"line 1: unsupported schema version {head[1]!r}")
    if len(lines) < 2 or not lines[1].startswith("type "):
        raise SerdeError("line 2: expected 'type <model_type>'")
    kind = lines[1].split(None, 1)[1].strip()
    if kind == "risk_score":
        return _parse_risk_score(lines)
    if kind == "decision_tree":
        return _parse_tree(lines)
    raise SerdeError(f"line 2: unknown model type {kind!r}")


def _parse_int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise SerdeError(f"{where}: expected integer, got {tok!r}") from None


def _parse_float(tok: str, where: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise SerdeError(f"{where}: expected float, got {tok!r}") from None


def _parse_risk_score(lines: list[str]) -> RiskScore:
    if len(lines) < 4:
        raise SerdeError("risk score document truncated")
    b = lines[2].split()
    if len(b) != 2 or b[0] != "bias2":
        raise SerdeError(f"line 3: expected 'bias2 <int>', got {lines[2]!r}")
    bias2 = _parse_int(b[1], "line 3 bias2")
    c = lines[3].split()
    if len(c) != 2 or c[0] != "conditions":
        raise SerdeError(f"line 4: expected 'conditions <count>', got {lines[3]!r}")
    count = _parse_int(c[1], "line 4 conditions")
    body = lines[4:]
    if len(body) != count:
        raise SerdeError(f"expected {count} condition lines, found {len(body)}")
    conds = []
    for i, ln in enumerate(body):
        parts = ln.split()
        where = f"condition line {i + 1}"
        if len(parts) != 4 or parts[0] != "condition":
            raise SerdeError(f"{where}: malformed {ln!r}")
        conds.append(
            Condition(
                feature=_parse_int(parts[1], where + " feature"),
                theta=_parse_float(parts[2], where + " theta"),
                weight=_parse_int(parts[3], where + " weight"),
            )
        )
    try:
        return RiskScore(conditions=tuple(conds), bias2=bias2)
    except Exception as exc:
        raise SerdeError(f"invalid risk score: {exc}") from exc


def _parse_tree(lines: list[str]) -> DecisionTree:
    f = lines[2].split()
    if len(f) != 2 or f[0] != "features":
        raise SerdeError(f"line 3: expected 'features <count>', got {lines[2]!r}")
    n_features = _parse_int(f[1], "line 3 features")
    body = lines[3:]
    pos = 0

    def parse_node() -> Node:
        nonlocal pos
        if pos >= len(body):
            raise SerdeError("tree document truncated: missing node")
        parts = body[pos].split()
        where = f"node line {pos + 1}"
        pos += 1
        if parts[0] == "leaf":
            if len(parts) != 2:
                raise SerdeError(f"{where}: malformed leaf {parts!r}")
            return Leaf(label=_parse_int(parts[1], where + " label"))
        if parts[0] == "split":
            if len(parts) != 3:
                raise SerdeError(f"{where}: malformed split {parts!r}")
            feature = _parse_int(parts[1], where + " feature")
            theta = _parse_float(parts[2], where + " theta")
            left = parse_node()
            right = parse_node()
            return Split(feature=feature, theta=theta, left=left, right=right)
        raise SerdeError(f"{where}: unknown node kind {parts[0]!r}")

    try:
        root = parse_node()
    except SerdeError:
        raise
    except Exception as exc:
        raise SerdeError(f"invalid tree node: {exc}") from exc
    if pos != len(body):
        raise SerdeError(f"trailing content after tree: {body[pos]!r}")
    try:
        tree = DecisionTree(root=root, n_features=n_features)
        validate_tree(tree)
    except SerdeError:
        raise
    except Exception as exc:
        raise SerdeError(f"invalid tree: {exc}") from exc
    return tree


def _fmt_bias(bias2: int) -> str:
    if bias2 % 2 == 0:
        return str(bias2 // 2)
    return f"{bias2}/2"


def _fmt_theta_display(t: float) -> str:
    return format(t, "g")


def render_scorecard(model: RiskScore, feature_names=None) -> str:
    """Render a risk score as a human-readable scorecard table.

    One row per condition ("name >= theta | weight | + ..."), with the bias
    first and a tally line at the bottom; the display mirrors how clinicians
    read additive point systems.
    """
    def name(i: int) -> str:
        if feature_names is not None and i < len(feature_names):
            return str(feature_names[i])
        return f"x{i}"

    rows = [("bias", _fmt_bias(model.bias2))]
    for c in sorted(model.conditions, key=lambda c: (c.feature, c.theta)):
        rows.append((f"{name(c.feature)} >= {_fmt_theta_display(c.theta)}", str(c.weight)))
    left_w = max(len(r[0]) for r in rows)
    right_w = max(len(r[1]) for r in rows)
    sep = "-" * (left_w + 2) + "+" + "-" * (right_w + 2) + "+------"
    out = [sep]
    for lhs, rhs in rows:
        out.append(f" {lhs.ljust(left_w)} | {rhs.rjust(right_w)} | + ...")
    out.append(sep)
    out.append(f" {'total score ='.rjust(left_w + right_w + 3)}")
    return "\n".join(out) + "\n"
