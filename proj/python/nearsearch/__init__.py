from nearsearch._core import (
    GridParseError,
    LatinArray,
    OracleCapError,
    __version__,
    certify_no_transversal,
    check_sequence,
    drisko,
    guarantee_length,
    max_diagonal_weight,
    max_partial_transversal,
    minimize_nk,
    run_cli,
    verify_order,
)

__all__ = [
    "GridParseError",
    "LatinArray",
    "OracleCapError",
    "__version__",
    "certify_no_transversal",
    "check_sequence",
    "drisko",
    "guarantee_length",
    "max_diagonal_weight",
    "max_partial_transversal",
    "minimize_nk",
    "run_cli",
    "verify_order",
]
