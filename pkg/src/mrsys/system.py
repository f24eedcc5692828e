"""Multirate state-space systems in the time domain.

A system maps a slow input sequence u to a slow output sequence y
through a periodically varying central recursion:

    x_{t+1} = A_t x_t + B_t uc_t,      uc = upsample(u, p),
    yc_t    = C_t x_t + D_t uc_t,      y  = downsample(yc, q),

where p = m/gcd(m,n), q = n/gcd(m,n) and the operator lists repeat
with the central period T = lcm(m, n). Input samples arrive every p
central steps and output samples are read every q central steps, so m
output samples pass per n input samples.
"""

from dataclasses import dataclass
from math import ceil, gcd, lcm

import numpy as np

from .exceptions import DimensionMismatchError, IncompatibleSystemsError
from .linalg import spectral_radius as _spectral_radius
from .signals import EmpCoefficients, VectorSequence

# entrywise tolerance for recognizing repeated operator lists
_PERIOD_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class MultirateSystem:
    """State-space data of an (m, n)-multirate system.

    ``A``, ``B``, ``C``, ``D`` are sequences of lcm(m, n) matrices
    indexed by central time. Entries are coerced to 2-D complex arrays
    (scalars become 1x1), but lengths and shapes are deliberately not
    enforced here; :func:`validate` reports violations instead of the
    constructor throwing, so malformed data can be inspected.
    """

    m: int
    n: int
    state_dim: int
    input_dim: int
    output_dim: int
    A: tuple
    B: tuple
    C: tuple
    D: tuple

    def __post_init__(self):
        for name in ("m", "n"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        for name in ("state_dim", "input_dim", "output_dim"):
            if int(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be nonnegative")
        for name in ("m", "n", "state_dim", "input_dim", "output_dim"):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ("A", "B", "C", "D"):
            seq = tuple(
                np.atleast_2d(np.asarray(mat, dtype=complex))
                for mat in getattr(self, name)
            )
            object.__setattr__(self, name, seq)

    @property
    def rate_gcd(self) -> int:
        return gcd(self.m, self.n)

    @property
    def up_factor(self) -> int:
        """Central steps between consecutive input samples (m/gcd)."""
        return self.m // self.rate_gcd

    @property
    def down_factor(self) -> int:
        """Central steps between consecutive output samples (n/gcd)."""
        return self.n // self.rate_gcd

    @property
    def period(self) -> int:
        return lcm(self.m, self.n)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple
    minimal_pair: tuple | None

    @property
    def ok(self) -> bool:
        return not self.violations


def _central_lists_repeat(sys: MultirateSystem, q: int) -> bool:
    """True if all four operator lists are (period/q)-periodic."""
    sub = sys.period // q
    for seq in (sys.A, sys.B, sys.C, sys.D):
        for t in range(sys.period - sub):
            if seq[t + sub].shape != seq[t].shape:
                return False
            if float(np.max(np.abs(seq[t + sub] - seq[t]), initial=0.0)) > _PERIOD_ATOL:
                return False
    return True


def minimal_multirate_pair(sys: MultirateSystem) -> tuple:
    """Smallest (m', n') realizing the same system by list repetition.

    Scans divisors of gcd(m, n) from the largest down and divides out
    the largest one under which the operator lists repeat.
    """
    c = sys.rate_gcd
    for q in sorted((d for d in range(1, c + 1) if c % d == 0), reverse=True):
        if _central_lists_repeat(sys, q):
            return (sys.m // q, sys.n // q)
    return (sys.m, sys.n)


def validate(sys: MultirateSystem) -> ValidationReport:
    """Check list lengths, shapes and finiteness; never raises.

    Returns a report whose ``violations`` is empty when the data is
    consistent; ``minimal_pair`` then carries the informational
    minimal multirate pair (m', n').
    """
    violations = []
    T = sys.period
    expected = {
        "A": (sys.state_dim, sys.state_dim),
        "B": (sys.state_dim, sys.input_dim),
        "C": (sys.output_dim, sys.state_dim),
        "D": (sys.output_dim, sys.input_dim),
    }
    for name, shape in expected.items():
        seq = getattr(sys, name)
        if len(seq) != T:
            violations.append(
                f"{name}: expected {T} matrices (lcm of rates), found {len(seq)}"
            )
            continue
        for t, mat in enumerate(seq):
            if mat.shape != shape:
                violations.append(
                    f"{name}[{t}]: expected shape {shape}, got {mat.shape}"
                )
            elif not np.all(np.isfinite(mat)):
                violations.append(f"{name}[{t}]: non-finite entries")
    minimal = minimal_multirate_pair(sys) if not violations else None
    return ValidationReport(tuple(violations), minimal)


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Sampled record of one simulation run.

    ``states`` holds one extra sample (the state after the last step).
    ``inputs``/``outputs`` are the slow external sequences; the central
    sequences live on the fast axis t = 0..steps-1.
    """

    inputs: VectorSequence
    central_inputs: VectorSequence
    states: VectorSequence
    central_outputs: VectorSequence
    outputs: VectorSequence

    @property
    def initial_state(self) -> np.ndarray:
        return self.states.values[0].copy()


def simulate(sys: MultirateSystem, x0, u: VectorSequence, steps: int) -> SimulationTrace:
    """Run the central recursion for ``steps`` central time steps.

    ``u`` is the slow input starting at time 0; samples beyond its
    stored window count as zero. ``x0`` may be None for a zero initial
    state.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if u.start != 0:
        raise ValueError("input window must start at time 0")
    if u.dim != sys.input_dim:
        raise DimensionMismatchError(
            f"input has dimension {u.dim}, system expects {sys.input_dim}"
        )
    dx = sys.state_dim
    if x0 is None:
        x0 = np.zeros(dx, dtype=complex)
    x0 = np.asarray(x0, dtype=complex).reshape(-1)
    if x0.shape[0] != dx:
        raise DimensionMismatchError(
            f"initial state has dimension {x0.shape[0]}, system expects {dx}"
        )
    p, q, T = sys.up_factor, sys.down_factor, sys.period

    n_slow_in = ceil(steps / p) if steps else 0
    central_u = np.zeros((steps, sys.input_dim), dtype=complex)
    for s in range(n_slow_in):
        central_u[p * s] = u.at(s)

    states = np.zeros((steps + 1, dx), dtype=complex)
    states[0] = x0
    central_y = np.zeros((steps, sys.output_dim), dtype=complex)
    for t in range(steps):
        k = t % T
        central_y[t] = sys.C[k] @ states[t] + sys.D[k] @ central_u[t]
        states[t + 1] = sys.A[k] @ states[t] + sys.B[k] @ central_u[t]

    return SimulationTrace(
        inputs=VectorSequence(u.window(0, n_slow_in), 0),
        central_inputs=VectorSequence(central_u, 0),
        states=VectorSequence(states, 0),
        central_outputs=VectorSequence(central_y, 0),
        outputs=VectorSequence(central_y[::q].copy(), 0),
    )


def reperiodize(sys: MultirateSystem, k: int) -> MultirateSystem:
    """Present the same system at rates (k*m, k*n) by tiling the lists.

    The recursion is unchanged; only the advertised period grows.
    """
    if k < 1:
        raise ValueError(f"tiling factor must be positive, got {k}")
    return MultirateSystem(
        sys.m * k,
        sys.n * k,
        sys.state_dim,
        sys.input_dim,
        sys.output_dim,
        sys.A * k,
        sys.B * k,
        sys.C * k,
        sys.D * k,
    )


def shift_origin(sys: MultirateSystem, tau: int) -> MultirateSystem:
    """Move the central time origin to ``tau``: new A_t = A_{t+tau} etc."""
    T = sys.period
    rotate = lambda seq: tuple(seq[(t + tau) % T] for t in range(T))
    return MultirateSystem(
        sys.m,
        sys.n,
        sys.state_dim,
        sys.input_dim,
        sys.output_dim,
        rotate(sys.A),
        rotate(sys.B),
        rotate(sys.C),
        rotate(sys.D),
    )


def difference(a: MultirateSystem, b: MultirateSystem) -> MultirateSystem:
    """Parallel interconnection realizing a - b.

    Both systems must share the port dimensions and the rate ratio
    m:n; the result is presented at the smallest common rate pair and
    stacks the two state spaces.
    """
    if a.input_dim != b.input_dim or a.output_dim != b.output_dim:
        raise IncompatibleSystemsError(
            f"port dimensions differ: ({a.output_dim}x{a.input_dim}) "
            f"vs ({b.output_dim}x{b.input_dim})"
        )
    if a.m * b.n != b.m * a.n:
        raise IncompatibleSystemsError(
            f"rate ratios differ: {a.m}:{a.n} vs {b.m}:{b.n}"
        )
    common = lcm(a.rate_gcd, b.rate_gcd)
    aa = reperiodize(a, common // a.rate_gcd)
    bb = reperiodize(b, common // b.rate_gcd)
    T = aa.period
    dxa, dxb = aa.state_dim, bb.state_dim
    dx = dxa + dxb
    A, B, C, D = [], [], [], []
    for t in range(T):
        At = np.zeros((dx, dx), dtype=complex)
        At[:dxa, :dxa] = aa.A[t]
        At[dxa:, dxa:] = bb.A[t]
        A.append(At)
        B.append(np.concatenate([aa.B[t], bb.B[t]], axis=0))
        C.append(np.concatenate([aa.C[t], -bb.C[t]], axis=1))
        D.append(aa.D[t] - bb.D[t])
    return MultirateSystem(
        aa.m, aa.n, dx, a.input_dim, a.output_dim,
        tuple(A), tuple(B), tuple(C), tuple(D),
    )


@dataclass(frozen=True, eq=False)
class SteadyState:
    """Coefficient stacks of a periodic steady-state regime at base z.

    All sequences share the modulation structure of the input: the
    central signals have the full period and base z, the slow input
    and output keep their own periods with bases z**p and z**q.
    ``initial_state`` is the state sample the regime passes through at
    time 0 (the coefficient sum).
    """

    z: complex
    inputs: EmpCoefficients
    central_inputs: EmpCoefficients
    states: EmpCoefficients
    central_outputs: EmpCoefficients
    outputs: EmpCoefficients

    @property
    def initial_state(self) -> np.ndarray:
        return self.states.coefficients.sum(axis=0)


def random_system(
    m: int,
    n: int,
    state_dim: int,
    input_dim: int,
    output_dim: int,
    radius: float | None = None,
    rng=None,
) -> MultirateSystem:
    """Draw a system with complex Gaussian entries.

    When ``radius`` is given, the state operator list is rescaled so
    the per-step growth rate of the one-period state product equals it
    (below 1 gives an exponentially stable central recursion). The
    other operators are left at unit scale.
    """
    rng = np.random.default_rng(rng)
    T = lcm(m, n)

    def draw(rows, cols):
        return (
            rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        ) / np.sqrt(2.0)

    A = [draw(state_dim, state_dim) for _ in range(T)]
    B = [draw(state_dim, input_dim) for _ in range(T)]
    C = [draw(output_dim, state_dim) for _ in range(T)]
    D = [draw(output_dim, input_dim) for _ in range(T)]
    if radius is not None and state_dim > 0:
        phi = np.eye(state_dim, dtype=complex)
        for t in range(T):
            phi = A[t] @ phi
        # normalize before estimating: rho(phi/s) <= 1 keeps the
        # squaring iterates bounded whatever the draw produced
        scale = float(np.linalg.norm(phi))
        rho = 0.0
        if scale > 0.0:
            rho = (scale * _spectral_radius(phi / scale, 1e-8)) ** (1.0 / T)
        if rho > 1e-12:
            A = [(radius / rho) * At for At in A]
    return MultirateSystem(
        m, n, state_dim, input_dim, output_dim,
        tuple(A), tuple(B), tuple(C), tuple(D),
    )
