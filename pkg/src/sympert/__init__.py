"""Williamson normal form and block perturbation of its symplectic diagonalizers."""

from .blockops import (
    CheckResult,
    SymplecticBlockSpec,
    concat_compatibility,
    is_orthosymplectic,
    is_symplectic,
    orthosymplectic_from_unitary,
    symplectic_block,
    symplectic_concat,
    symplectic_diagonal_block,
    symplectic_direct_sum,
)
from .core import ClusterStructure, build_clusters, frobenius_norm, spectral_norm, symplectic_form
from .errors import (
    DegenerateInputError,
    DomainError,
    InsufficientDataError,
    IsotropicRangeError,
    NotPositiveDefiniteError,
    NumericError,
    SympertError,
)
from .numerics import ComplexPair, SymmetricEigen, fit_loglog_slope, pd_power, random_unitary, sym_eigen
from .perturb import (
    AlignmentResult,
    CorrectionResult,
    PerturbationReport,
    ScalingStudy,
    align_orthosymplectic,
    esr,
    nearest_diagonalizer,
    perturbation_report,
    scaling_study,
    symplectic_correction,
)
from .williamson import (
    InstanceSpec,
    WilliamsonResult,
    make_instance,
    random_symmetric,
    random_symplectic,
    symplectic_inverse,
    symplectic_spectrum_oracle,
    williamson_decompose,
)

__version__ = "0.1.0"
