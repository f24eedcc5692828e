"""Frequency lifting of multirate systems.

A T-periodic matrix sequence acts on modulated signals coefficient-wise
through its block Toeplitz transform: block (r, c) is the Fourier
coefficient of index (r - c) mod T. Lifting a system replaces the four
operator lists by their Toeplitz transforms, turning the time-domain
recursion into the algebraic system

    N xhat = z (A xhat + B uhat),      yhat = C xhat + D uhat,

where N is the block diagonal of the T-th roots of unity over the state
space. Solving it gives the central transfer matrix

    Gc(z) = z C (N - z A)^{-1} B + D,

and compressing Gc with replication stacks on both ports yields the
m x n block harmonic transfer matrix of the multirate system.
"""

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .exceptions import (
    DimensionMismatchError,
    NotDivisorError,
    NotInResolventError,
)
from .linalg import smallest_singular_value, solve_linear
from .signals import (
    EmpCoefficients,
    modulation_matrix,
    replication_matrix,
    unit_root,
)
from .system import (
    MultirateSystem,
    SteadyState,
    _central_lists_repeat,
    reperiodize,
    validate,
)


def fourier_coefficients(seq) -> list:
    """Matrix Fourier coefficients of a finite periodic matrix sequence.

    Coefficient k is (1/T) * sum_t seq[t] * exp(-2j*pi*t*k/T) with
    T = len(seq); all entries must share one shape.
    """
    mats = [np.atleast_2d(np.asarray(m, dtype=complex)) for m in seq]
    T = len(mats)
    if T == 0:
        raise ValueError("sequence must be nonempty")
    shape = mats[0].shape
    for t, mat in enumerate(mats):
        if mat.shape != shape:
            raise ValueError(
                f"entry {t} has shape {mat.shape}, expected {shape}"
            )
    return [
        sum(mats[t] * unit_root(T, -(t * k)) for t in range(T)) / T
        for k in range(T)
    ]


def toeplitz_transform(seq) -> np.ndarray:
    """Block Toeplitz matrix of a periodic sequence.

    Block (r, c) is the Fourier coefficient of index (r - c) mod T, so
    the first block column lists all coefficients in order and the
    matrix commutes with the cyclic block shift.
    """
    coeffs = fourier_coefficients(seq)
    T = len(coeffs)
    rows, cols = coeffs[0].shape
    out = np.zeros((T * rows, T * cols), dtype=complex)
    for r in range(T):
        for c in range(T):
            out[r * rows : (r + 1) * rows, c * cols : (c + 1) * cols] = coeffs[
                (r - c) % T
            ]
    return out


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    """Toeplitz transforms of the four operator lists plus the state
    modulation N; everything an evaluation in the frequency domain
    needs."""

    m: int
    n: int
    state_dim: int
    input_dim: int
    output_dim: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    modulation: np.ndarray

    @property
    def rate_gcd(self) -> int:
        return gcd(self.m, self.n)

    @property
    def up_factor(self) -> int:
        return self.m // self.rate_gcd

    @property
    def down_factor(self) -> int:
        return self.n // self.rate_gcd

    @property
    def period(self) -> int:
        return lcm(self.m, self.n)

    @property
    def root(self) -> complex:
        """Primitive period-th root of unity generating the modulation."""
        return unit_root(self.period, 1)


def lift(sys: MultirateSystem) -> LiftedSystem:
    """Lift a validated system to its frequency-domain block form."""
    report = validate(sys)
    if not report.ok:
        raise ValueError(f"system fails validation: {report.violations[0]}")
    return LiftedSystem(
        sys.m,
        sys.n,
        sys.state_dim,
        sys.input_dim,
        sys.output_dim,
        toeplitz_transform(sys.A),
        toeplitz_transform(sys.B),
        toeplitz_transform(sys.C),
        toeplitz_transform(sys.D),
        modulation_matrix(sys.period, sys.state_dim),
    )


def _resolvent_margin(lifted: LiftedSystem, z: complex):
    """Smallest singular value of N - z*A and the scale it is judged by."""
    pencil = lifted.modulation - z * lifted.A
    scale = 1.0 + abs(z) * float(np.linalg.norm(lifted.A))
    return smallest_singular_value(pencil), scale


def in_harmonic_resolvent(sys, z: complex, tol: float = 1e-9) -> bool:
    """Whether N - z*A is safely invertible.

    Accepts a MultirateSystem or an already lifted system. z = 0 is
    always inside (N is unitary); the test is
    sigma_min(N - z A) > tol * (1 + |z| * ||A||_F).
    """
    lifted = sys if isinstance(sys, LiftedSystem) else lift(sys)
    if z == 0 or lifted.state_dim == 0:
        return True
    sigma, scale = _resolvent_margin(lifted, z)
    return sigma > tol * scale


def central_transfer(lifted: LiftedSystem, z: complex, tol: float = 1e-9) -> np.ndarray:
    """Central transfer matrix z C (N - z A)^{-1} B + D.

    Raises NotInResolventError when z fails the resolvent margin test.
    """
    if lifted.state_dim == 0 or z == 0:
        return lifted.D.copy()
    sigma, scale = _resolvent_margin(lifted, z)
    if sigma <= tol * scale:
        raise NotInResolventError(z, sigma, tol * scale)
    x = solve_linear(lifted.modulation - z * lifted.A, lifted.B)
    return z * (lifted.C @ x) + lifted.D


@dataclass(frozen=True, eq=False)
class TransferValue:
    """Harmonic transfer matrix at one point, with its block layout.

    ``matrix`` has m row blocks (output_dim each) and n column blocks
    (input_dim each).
    """

    z: complex
    matrix: np.ndarray
    m: int
    n: int


def harmonic_transfer(sys, z: complex, tol: float = 1e-9) -> TransferValue:
    """Harmonic transfer matrix of a multirate system at z.

    Accepts either a MultirateSystem (lifted on the fly) or an already
    lifted system; pre-lift once when evaluating at many points. The
    central transfer matrix is compressed by replication stacks on both
    ports and divided by the input replication count.
    """
    lifted = sys if isinstance(sys, LiftedSystem) else lift(sys)
    core = central_transfer(lifted, z, tol)
    stack_y = replication_matrix(lifted.m, 1.0, lifted.down_factor, lifted.output_dim)
    stack_u = replication_matrix(lifted.n, 1.0, lifted.up_factor, lifted.input_dim)
    matrix = stack_y.conj().T @ core @ stack_u / lifted.up_factor
    return TransferValue(complex(z), matrix, lifted.m, lifted.n)


def detect_shorter_period(sys: MultirateSystem, q: int) -> bool:
    """Whether the operator lists already repeat with period T/q.

    ``q`` must divide the central period; equivalently (and tested as
    an invariant) all four Toeplitz transforms are supported on the
    block diagonals whose distance is a multiple of q.
    """
    if q < 1 or sys.period % q != 0:
        raise NotDivisorError(
            f"{q} does not divide the central period {sys.period}"
        )
    return _central_lists_repeat(sys, q)


def transfer_at_period(sys: MultirateSystem, k: int, z: complex, tol: float = 1e-9) -> TransferValue:
    """Harmonic transfer of the same system presented at rates (km, kn).

    Inflating the presentation spreads the same operator along the new
    block structure; the result interlaces zero columns/rows of the
    original transfer in the sense of the up/downsampling identities.
    """
    return harmonic_transfer(reperiodize(sys, k), z, tol)


def emp_steady_state(
    sys: MultirateSystem,
    z: complex,
    inputs: EmpCoefficients,
    tol: float = 1e-9,
) -> SteadyState:
    """Steady-state regime driven by a modulated input.

    ``inputs`` holds the slow input coefficients (period n, base z**p
    where p is the input upsampling factor). The returned stacks solve
    the lifted equations, so simulating from ``initial_state`` with the
    synthesized input reproduces the synthesized state and output
    sequences sample by sample.
    """
    if z == 0:
        raise ValueError("modulation base must be nonzero")
    if inputs.period != sys.n:
        raise ValueError(
            f"input coefficients have period {inputs.period}, expected {sys.n}"
        )
    if inputs.dim != sys.input_dim:
        raise DimensionMismatchError(
            f"input has dimension {inputs.dim}, system expects {sys.input_dim}"
        )
    p, q, T = sys.up_factor, sys.down_factor, sys.period
    expected_base = z**p
    if abs(inputs.base - expected_base) > 1e-9 * (1.0 + abs(expected_base)):
        raise ValueError(
            f"input base {inputs.base} does not match z**{p} = {expected_base}"
        )
    lifted = lift(sys)
    uvec = inputs.flat()
    central_u = replication_matrix(sys.n, 1.0, p, sys.input_dim) @ uvec / p
    if sys.state_dim > 0:
        sigma, scale = _resolvent_margin(lifted, z)
        if sigma <= tol * scale:
            raise NotInResolventError(z, sigma, tol * scale)
        xvec = z * solve_linear(
            lifted.modulation - z * lifted.A, lifted.B @ central_u
        )
    else:
        xvec = np.zeros(0, dtype=complex)
    central_y = lifted.C @ xvec + lifted.D @ central_u
    yvec = (
        replication_matrix(sys.m, 1.0, q, sys.output_dim).conj().T @ central_y
    )
    return SteadyState(
        z=complex(z),
        inputs=inputs,
        central_inputs=EmpCoefficients.from_flat(T, z, central_u, sys.input_dim),
        states=EmpCoefficients.from_flat(T, z, xvec, sys.state_dim),
        central_outputs=EmpCoefficients.from_flat(T, z, central_y, sys.output_dim),
        outputs=EmpCoefficients.from_flat(sys.m, z**q, yvec, sys.output_dim),
    )
