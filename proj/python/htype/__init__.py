"""H-type metric Lie algebras: construction, verification and classification."""

from ._htype import (  # noqa: F401
    DEFAULT_TOLERANCE,
    DERIVED_TOLERANCE,
    HTypeError,
    MetricLieAlgebra,
    center,
    classify,
    clifford_algebra,
    clifford_defect,
    compute_j,
    direct_sum,
    from_clifford_representation,
    heisenberg_complex,
    heisenberg_real,
    isometry_defect,
    j_bilinear_form,
    load_algebra,
    nilpotency_step,
    polarized_isometry_defect,
    save_algebra,
    scramble,
    validate_algebra,
    verify_h_type,
    verify_isomorphism,
)

__version__ = "0.1.0"
