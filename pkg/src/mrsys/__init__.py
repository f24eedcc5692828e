"""Discrete-time multirate linear systems.

Frequency lifting of periodically varying state-space recursions with
different input and output rates, harmonic transfer matrices on block
Toeplitz form, Hilbert-Schmidt system norms, and optimal approximation
by systems of a shorter period.
"""

from .exceptions import (
    BadTargetError,
    DimensionMismatchError,
    IncompatibleSystemsError,
    LyapunovConvergenceError,
    MisalignedSequenceError,
    MrsysError,
    NotDivisorError,
    NotInResolventError,
    SingularMatrixError,
    SpectralRadiusOverflowError,
    SystemFileError,
    UnstableSystemError,
)
from .linalg import (
    smallest_singular_value,
    solve_discrete_lyapunov,
    solve_linear,
    spectral_radius,
)
from .signals import (
    EmpCoefficients,
    VectorSequence,
    cyclic_shift,
    downsample,
    downsample_matrix,
    emp_analysis_matrix,
    emp_analyze,
    emp_synthesis_matrix,
    emp_synthesize,
    is_emp,
    modulation_matrix,
    replication_matrix,
    unit_root,
    upsample,
    upsample_matrix,
)
from .system import (
    MultirateSystem,
    SimulationTrace,
    SteadyState,
    ValidationReport,
    difference,
    minimal_multirate_pair,
    random_system,
    reperiodize,
    shift_origin,
    simulate,
    validate,
)
from .lifting import (
    LiftedSystem,
    TransferValue,
    central_transfer,
    detect_shorter_period,
    emp_steady_state,
    fourier_coefficients,
    harmonic_transfer,
    in_harmonic_resolvent,
    lift,
    toeplitz_transform,
    transfer_at_period,
)
from .approx import (
    ApproxTarget,
    HsReport,
    downsampled_transfer,
    hs_distance,
    hs_norm,
    optimal_approximant,
    reduce_target,
    taylor_coefficients,
)
from .files import (
    load_system,
    save_system,
    system_from_json_dict,
    system_to_json_dict,
)
from .verify import PropertyResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "ApproxTarget",
    "BadTargetError",
    "DimensionMismatchError",
    "EmpCoefficients",
    "HsReport",
    "IncompatibleSystemsError",
    "LiftedSystem",
    "LyapunovConvergenceError",
    "MisalignedSequenceError",
    "MrsysError",
    "MultirateSystem",
    "NotDivisorError",
    "NotInResolventError",
    "PropertyResult",
    "SimulationTrace",
    "SingularMatrixError",
    "SpectralRadiusOverflowError",
    "SteadyState",
    "SystemFileError",
    "TransferValue",
    "UnstableSystemError",
    "ValidationReport",
    "VectorSequence",
    "central_transfer",
    "cyclic_shift",
    "detect_shorter_period",
    "difference",
    "downsample",
    "downsample_matrix",
    "downsampled_transfer",
    "emp_analysis_matrix",
    "emp_analyze",
    "emp_steady_state",
    "emp_synthesis_matrix",
    "emp_synthesize",
    "fourier_coefficients",
    "harmonic_transfer",
    "hs_distance",
    "hs_norm",
    "in_harmonic_resolvent",
    "is_emp",
    "lift",
    "load_system",
    "minimal_multirate_pair",
    "modulation_matrix",
    "optimal_approximant",
    "random_system",
    "reduce_target",
    "replication_matrix",
    "reperiodize",
    "run_verification",
    "save_system",
    "shift_origin",
    "simulate",
    "smallest_singular_value",
    "solve_discrete_lyapunov",
    "solve_linear",
    "spectral_radius",
    "system_from_json_dict",
    "system_to_json_dict",
    "taylor_coefficients",
    "toeplitz_transform",
    "transfer_at_period",
    "unit_root",
    "upsample",
    "upsample_matrix",
    "validate",
]
