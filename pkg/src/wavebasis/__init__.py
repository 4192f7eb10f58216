"""Turning-point-safe basis functions, transfer matrices and spectra for ``u'' + k^2 u = 0``."""

__version__ = "0.1.0"

from .bases import (
    AiryImproved,
    BasisEvaluation,
    BasisKind,
    basis_derivative,
    cos_sqrt,
    eval_basis,
    sinc_sqrt,
    solution_from_ic,
)
from .bloch import (
    DispersionPoint,
    PeriodicProfile,
    homogenization_error,
    kappa_exact,
    kappa_new,
    kappa_wkb,
)
from .dtmm import (
    AccumulatedB,
    ComplexCoefficient,
    CSTBlocks,
    StateVector4,
    TransferMatrix4,
    accumulate_B,
    compose,
    cst_blocks,
    invert,
    matrix_D,
    piecewise_propagate,
    propagate,
    transfer_Q,
)
from .errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    ForbiddenRegionError,
    IntegrationError,
    NoRootError,
    NoTurningPointError,
    NumericalError,
    PreconditionError,
    SingularPointError,
    TruncationError,
    WaveBasisError,
)
from .oracle import Grid, OracleEigenresult, integrate_ivp, numerov_eigensolve, two_layer_cos_kl
from .profiles import (
    NORMALIZED,
    HardWall,
    Harmonic,
    KsqProfile,
    OpticalSpec,
    PhysicalScales,
    PiecewiseConstant,
    PowerLaw,
    SingularPowerLaw,
    Tabulated,
    integrate_k,
    integrate_ksq,
    ksq_at,
    load_potential,
    turning_point,
)
from .spectra import (
    EnergyLevel,
    EnergySpectrum,
    QuantizationRule,
    RuleKind,
    compare_spectra,
    harmonic_exact_energy,
    infinite_well_energy,
    power_law_energy,
    singular_energy,
    solve_quantization,
    wkb_quarkonium_energy,
)
