"""Communication-complexity workbench: python veneer over the C++ core."""

from ._ccwb import (
    BooleanMatrix,
    CompiledProtocol,
    IoError,
    NotPeelableError,
    ParameterError,
    ValidationError,
    bernstein_tail,
    compile_protocol,
    contains_gt,
    core_witness,
    derandomize,
    deterministic_cc,
    disc,
    equality_error,
    expected_rect_mass,
    gt,
    identity,
    load_bmat,
    peelable,
    rcc_lower_bound,
    row_regular,
    submatrix,
    survey,
    zero_out_row,
)

__all__ = [
    "BooleanMatrix",
    "CompiledProtocol",
    "IoError",
    "NotPeelableError",
    "ParameterError",
    "ValidationError",
    "bernstein_tail",
    "compile_protocol",
    "contains_gt",
    "core_witness",
    "derandomize",
    "deterministic_cc",
    "disc",
    "equality_error",
    "expected_rect_mass",
    "gt",
    "identity",
    "load_bmat",
    "peelable",
    "rcc_lower_bound",
    "row_regular",
    "submatrix",
    "survey",
    "zero_out_row",
]
