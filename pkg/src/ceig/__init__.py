"""Largest C-eigenvalues of piezoelectric-type tensors, their symmetric
fourth-order companions, and perturbation intervals with proven nesting."""

from .bounds import (
    BoundReport,
    Interval,
    bound_additive,
    bound_quadratic,
    bound_spectral,
    check_nesting,
    full_report,
)
from .errors import (
    BadLength,
    CeigError,
    DimensionMismatch,
    NegativeInput,
    NoConvergence,
    NonFinite,
    ParseError,
    PropertyViolation,
    RadicandNegative,
    SymmetryViolation,
    UnsupportedDimension,
    ValidationError,
)
from .harness import (
    CSV_HEADER,
    DEFAULT_EPSILONS,
    ExperimentConfig,
    MaterialRecord,
    ResultRow,
    emit_csv,
    emit_markdown,
    gen_perturbation,
    load_material,
    load_materials,
    run_experiment,
)
from .rng import SplitMix64, derive_seed
from .spectral import (
    CEigenpair,
    SolverConfig,
    ZEigenpair,
    c_max_alternating,
    c_max_via_lift,
    grid_oracle_c,
    grid_oracle_z,
    z_max,
    z_min,
)
from .tensors import (
    PiezoTensor,
    SymTensor4,
    apply_cubic,
    apply_xay,
    apply_yy,
    eval_quartic,
    form_xayy,
    format_tensor_text,
    lift,
    make_piezo,
    parse_tensor_text,
    sub,
    unfold_spectral_norm,
)

__version__ = "0.1.0"

__all__ = [
    "BadLength",
    "BoundReport",
    "CEigenpair",
    "CSV_HEADER",
    "CeigError",
    "DEFAULT_EPSILONS",
    "DimensionMismatch",
    "ExperimentConfig",
    "Interval",
    "MaterialRecord",
    "NegativeInput",
    "NoConvergence",
    "NonFinite",
    "ParseError",
    "PiezoTensor",
    "PropertyViolation",
    "RadicandNegative",
    "ResultRow",
    "SolverConfig",
    "SplitMix64",
    "SymTensor4",
    "SymmetryViolation",
    "UnsupportedDimension",
    "ValidationError",
    "ZEigenpair",
    "apply_cubic",
    "apply_xay",
    "apply_yy",
    "bound_additive",
    "bound_quadratic",
    "bound_spectral",
    "c_max_alternating",
    "c_max_via_lift",
    "check_nesting",
    "derive_seed",
    "emit_csv",
    "emit_markdown",
    "eval_quartic",
    "form_xayy",
    "format_tensor_text",
    "full_report",
    "gen_perturbation",
    "grid_oracle_c",
    "grid_oracle_z",
    "lift",
    "load_material",
    "load_materials",
    "make_piezo",
    "parse_tensor_text",
    "run_experiment",
    "sub",
    "unfold_spectral_norm",
    "z_max",
    "z_min",
]
