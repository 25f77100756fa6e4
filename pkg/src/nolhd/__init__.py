"""Nearly orthogonal Latin hypercube designs and Lasso screening experiments."""

from ._accel import BACKEND
from .criteria import CorrelationSummary, compute_criteria, correlation_matrix
from .design import (DesignMatrix, OrthogonalArray, SignMatrix, centered_levels,
                     check_oa_strength2, is_latin_hypercube, rao_hamming_oa,
                     read_design_csv, sylvester_sign_matrix, write_design_csv)
from .exceptions import (DegenerateColumnError, DomainError, RejectedInputError,
                         UnsupportedParameterError)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "__version__",
    "CorrelationSummary", "compute_criteria", "correlation_matrix",
    "DesignMatrix", "OrthogonalArray", "SignMatrix", "centered_levels",
    "check_oa_strength2", "is_latin_hypercube", "rao_hamming_oa",
    "read_design_csv", "sylvester_sign_matrix", "write_design_csv",
    "DegenerateColumnError", "DomainError", "RejectedInputError", "UnsupportedParameterError",
]
