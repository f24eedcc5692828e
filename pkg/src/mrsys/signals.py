"""Vector-valued sample sequences and the modulated Fourier calculus.

A signal here is a finite window of samples of a vector-valued sequence
over integer time. The frequency side works with signals of the form

    v_t = z**(-t) * sum_k vhat_k * exp(2j*pi*t*k/T),   k = 0..T-1,

i.e. a T-periodic trigonometric polynomial modulated by the geometric
sequence z**(-t). ``emp_analyze`` recovers the coefficient stack
``vhat`` from one period of samples and ``emp_synthesize`` evaluates
the closed form on any window ("emp" = exponentially modulated
polynomial/periodic signal).

The structure matrices at the bottom (modulation, cyclic block shift,
replication, up/down selection) are the finite-dimensional operators
the lifting layer is built from.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import MisalignedSequenceError


def unit_root(period: int, k: int) -> complex:
    """exp(2j*pi*k/period), with the index reduced mod period first."""
    if period < 1:
        raise ValueError(f"period must be positive, got {period}")
    r = k % period
    return complex(np.exp(2j * np.pi * r / period))


@dataclass(frozen=True, eq=False)
class VectorSequence:
    """A window of vector samples starting at integer time ``start``.

    ``values`` has one row per sample; scalar input is promoted to a
    one-column array. Samples outside the stored window are treated as
    zero by :meth:`at` and :meth:`window`, which is the right reading
    for finitely supported signals.
    """

    values: np.ndarray
    start: int = 0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim == 1:
            vals = vals[:, np.newaxis]
        if vals.ndim != 2:
            raise ValueError(f"values must be 1-D or 2-D, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "start", int(self.start))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def stop(self) -> int:
        """One past the last stored time index."""
        return self.start + self.values.shape[0]

    def __len__(self) -> int:
        return self.values.shape[0]

    def at(self, t: int) -> np.ndarray:
        """Sample at absolute time t (zero outside the window)."""
        if self.start <= t < self.stop:
            return self.values[t - self.start].copy()
        return np.zeros(self.dim, dtype=complex)

    def window(self, start: int, length: int) -> np.ndarray:
        """Samples at times start..start+length-1 as rows, zero-filled."""
        out = np.zeros((length, self.dim), dtype=complex)
        lo = max(start, self.start)
        hi = min(start + length, self.stop)
        if lo < hi:
            out[lo - start : hi - start] = self.values[lo - self.start : hi - self.start]
        return out

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def upsample(v: VectorSequence, q: int) -> VectorSequence:
    """Insert q-1 zero samples after every sample but the last.

    The sample at time t moves to time q*t, so a window of n samples
    starting at s becomes q*(n-1)+1 samples starting at q*s.
    """
    if q < 1:
        raise ValueError(f"rate factor must be positive, got {q}")
    n = len(v)
    if n == 0:
        return VectorSequence(np.zeros((0, v.dim)), v.start * q)
    out = np.zeros((q * (n - 1) + 1, v.dim), dtype=complex)
    out[::q] = v.values
    return VectorSequence(out, v.start * q)


def downsample(v: VectorSequence, q: int) -> VectorSequence:
    """Keep every q-th sample: (downsample v)_t = v_{q t}.

    The stored window must start at a multiple of q so that the kept
    samples sit at well-defined output times.
    """
    if q < 1:
        raise ValueError(f"rate factor must be positive, got {q}")
    if v.start % q != 0:
        raise MisalignedSequenceError(
            f"window starts at {v.start}, which is not a multiple of {q}"
        )
    return VectorSequence(v.values[::q].copy(), v.start // q)


@dataclass(frozen=True, eq=False)
class EmpCoefficients:
    """Coefficient stack (vhat_0, ..., vhat_{T-1}) of a modulated signal.

    ``base`` is the modulation base z; ``coefficients`` holds one row
    per harmonic.
    """

    period: int
    base: complex
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=complex)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, np.newaxis]
        if coeffs.ndim != 2 or coeffs.shape[0] != self.period:
            raise ValueError(
                f"expected {self.period} coefficient rows, got shape {coeffs.shape}"
            )
        object.__setattr__(self, "period", int(self.period))
        object.__setattr__(self, "base", complex(self.base))
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def dim(self) -> int:
        return self.coefficients.shape[1]

    def flat(self) -> np.ndarray:
        """All coefficients stacked into one vector, harmonic-major."""
        return self.coefficients.reshape(-1).copy()

    @classmethod
    def from_flat(cls, period: int, base: complex, vec, dim: int) -> "EmpCoefficients":
        vec = np.asarray(vec, dtype=complex).reshape(period, dim)
        return cls(period, base, vec)


def _analysis_scalar_matrix(period: int, z: complex) -> np.ndarray:
    zp = np.array([z ** int(t) for t in range(period)], dtype=complex)
    w = np.empty((period, period), dtype=complex)
    for k in range(period):
        for t in range(period):
            w[k, t] = zp[t] * unit_root(period, -(k * t)) / period
    return w


def _synthesis_scalar_matrix(period: int, z: complex, times) -> np.ndarray:
    w = np.empty((len(times), period), dtype=complex)
    for i, t in enumerate(times):
        zfac = z ** int(-t)
        for k in range(period):
            w[i, k] = zfac * unit_root(period, t * k)
    return w


def emp_analysis_matrix(period: int, z: complex, dim: int) -> np.ndarray:
    """Matrix mapping one period of samples to the coefficient stack."""
    if z == 0:
        raise ValueError("modulation base must be nonzero")
    return np.kron(_analysis_scalar_matrix(period, z), np.eye(dim, dtype=complex))


def emp_synthesis_matrix(period: int, z: complex, dim: int) -> np.ndarray:
    """Inverse of :func:`emp_analysis_matrix` (evaluation at t = 0..T-1)."""
    if z == 0:
        raise ValueError("modulation base must be nonzero")
    return np.kron(
        _synthesis_scalar_matrix(period, z, range(period)), np.eye(dim, dtype=complex)
    )


def emp_analyze(v: VectorSequence, z: complex, period: int) -> EmpCoefficients:
    """Coefficients of the modulated signal matching ``v`` on 0..T-1.

    ``v`` must hold exactly one period of samples at indices 0..T-1:

        vhat_k = (1/T) * sum_t v_t * z**t * exp(-2j*pi*t*k/T).
    """
    if z == 0:
        raise ValueError("modulation base must be nonzero")
    if v.start != 0 or len(v) != period:
        raise ValueError(
            f"need exactly {period} samples at indices 0..{period - 1}, "
            f"got {len(v)} starting at {v.start}"
        )
    coeffs = _analysis_scalar_matrix(period, z) @ v.values
    return EmpCoefficients(period, z, coeffs)


def emp_synthesize(c: EmpCoefficients, times: range) -> VectorSequence:
    """Evaluate the modulated closed form on a window of times."""
    if c.base == 0:
        raise ValueError("modulation base must be nonzero")
    vals = _synthesis_scalar_matrix(c.period, c.base, times) @ c.coefficients
    return VectorSequence(vals, times.start if len(times) else 0)


def is_emp(v: VectorSequence, z: complex, period: int, rel_tol: float = 1e-9) -> bool:
    """Whether ``t -> z**t * v_t`` is ``period``-periodic on the window.

    Needs at least one period of samples; with exactly one period there
    is nothing to compare and the answer is trivially True.
    """
    if len(v) < period:
        raise ValueError(f"window holds {len(v)} samples, need at least {period}")
    demod = np.array(
        [z ** int(t) for t in range(v.start, v.stop)], dtype=complex
    )[:, np.newaxis] * v.values
    scale = float(np.max(np.abs(demod))) if demod.size else 0.0
    diff = demod[period:] - demod[:-period] if len(v) > period else demod[:0]
    if diff.size == 0:
        return True
    return float(np.max(np.abs(diff))) <= rel_tol * max(scale, 1e-300)


def modulation_matrix(period: int, dim: int) -> np.ndarray:
    """Block diagonal of exp(2j*pi*k/period) * I_dim for k = 0..period-1."""
    roots = np.array([unit_root(period, k) for k in range(period)])
    return np.kron(np.diag(roots), np.eye(dim, dtype=complex))


def cyclic_shift(period: int, dim: int, power: int = 1) -> np.ndarray:
    """Cyclic block shift on stacks of ``period`` blocks of size ``dim``.

    Shifts block content up by ``power`` slots: output block r equals
    input block (r + power) mod period, so power=1 advances the stack
    and negative powers delay it. cyclic_shift(T, d, T) is the identity.
    """
    p = np.zeros((period, period))
    for r in range(period):
        p[r, (r + power) % period] = 1.0
    return np.kron(p, np.eye(dim)).astype(complex)


def replication_matrix(period: int, base: complex, copies: int, dim: int) -> np.ndarray:
    """Stack of scaled identities: block k is base**(k*period) * I.

    Maps a stack of ``period`` blocks of size ``dim`` to ``copies``
    geometrically scaled repetitions of it; with base 1 it is plain
    replication. Its adjoint folds a long stack back by summing the
    conjugate-scaled segments.
    """
    if copies < 1:
        raise ValueError(f"copies must be positive, got {copies}")
    size = period * dim
    eye = np.eye(size, dtype=complex)
    return np.vstack([base ** (k * period) * eye for k in range(copies)])


def upsample_matrix(q: int, count: int, dim: int) -> np.ndarray:
    """Matrix form of upsample on a ``count``-block window.

    Maps count blocks to q*count blocks (trailing zeros included, so it
    covers the full q*count window rather than stopping at the last
    nonzero sample).
    """
    out = np.zeros((q * count * dim, count * dim), dtype=complex)
    for t in range(count):
        out[q * t * dim : (q * t + 1) * dim, t * dim : (t + 1) * dim] = np.eye(dim)
    return out


def downsample_matrix(q: int, count: int, dim: int) -> np.ndarray:
    """Matrix form of downsample from q*count blocks to count blocks."""
    out = np.zeros((count * dim, q * count * dim), dtype=complex)
    for t in range(count):
        out[t * dim : (t + 1) * dim, q * t * dim : (q * t + 1) * dim] = np.eye(dim)
    return out
