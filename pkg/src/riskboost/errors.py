"""Exception types raised by the library.

Every error carries a human-readable message naming the offending input;
callers are expected to catch the specific subclass they can handle.
"""


class RiskboostError(Exception):
    """Base class for all library errors."""


class IngestError(RiskboostError):
    """Raised when a CSV file cannot be parsed into a labeled dataset."""


class SplitError(RiskboostError):
    """Raised when a dataset is too small to partition."""


class SerdeError(RiskboostError):
    """Raised when a model document fails to serialize or parse."""


class SearchError(RiskboostError):
    """Raised when a weak-learner search receives an empty dataset."""


class GenError(RiskboostError):
    """Raised when a synthetic-data generator cannot produce a sample."""


class DomainError(RiskboostError):
    """Raised when an argument lies outside its documented domain."""


class TrainError(RiskboostError):
    """Raised when training preconditions are violated."""


class ConstructionError(RiskboostError):
    """Raised when a constructive procedure finds its premise violated."""


class SolverError(RiskboostError):
    """Raised when an optimization routine fails or detects infeasibility."""


class EvalError(RiskboostError):
    """Raised when an evaluation protocol cannot be carried out."""


class ContractError(RiskboostError):
    """Raised when a model violates a structural assumption of an operation."""


class InternalError(RiskboostError):
    """Raised when an internal numerical invariant is violated."""
