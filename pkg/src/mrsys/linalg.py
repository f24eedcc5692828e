"""Dense complex linear algebra kernels.

Everything here works on plain complex128 ndarrays. The factorizations
come from LAPACK via scipy/numpy; the two iterations (Gelfand squaring
for the spectral radius, Smith squaring for the discrete Lyapunov
equation) are written out because their stop rules are part of the
package contract.
"""

import warnings

import numpy as np
import scipy.linalg

from .exceptions import (
    LyapunovConvergenceError,
    SingularMatrixError,
    SpectralRadiusOverflowError,
)

# pivot below this multiple of ||A||_F counts as singular
_PIVOT_RTOL = 1e-12
_LOG_OVERFLOW = np.log(1e300)
_MAX_SQUARINGS = 60
_SMITH_RTOL = 1e-14
_SMITH_MAX_ITER = 200


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def solve_linear(a, b) -> np.ndarray:
    """Solve ``A X = B`` for X by LU factorization with partial pivoting.

    Parameters
    ----------
    a : (n, n) array_like
        Square complex coefficient matrix.
    b : (n,) or (n, k) array_like
        Right-hand side(s).

    Returns
    -------
    ndarray
        Solution with the same trailing shape as ``b``.

    Raises
    ------
    SingularMatrixError
        If the smallest pivot of the factorization falls at or below
        ``1e-12 * ||A||_F``.
    """
    a = _as_square(a)
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != a.shape[0]:
        raise ValueError(
            f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}"
        )
    if a.shape[0] == 0:
        return b.copy()
    anorm = float(np.linalg.norm(a))
    with warnings.catch_warnings():
        # singularity is detected by the pivot test below, not by scipy
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a)
    smallest_pivot = float(np.abs(np.diagonal(lu)).min())
    threshold = _PIVOT_RTOL * anorm
    if smallest_pivot <= threshold:
        raise SingularMatrixError(smallest_pivot, threshold)
    return scipy.linalg.lu_solve((lu, piv), b)


def smallest_singular_value(a) -> float:
    """Smallest singular value of a nonempty complex matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if a.size == 0:
        raise ValueError("matrix must be nonempty")
    return float(np.linalg.svd(a, compute_uv=False)[-1])


def spectral_radius(a, rel_tol: float = 1e-6) -> float:
    """Spectral radius estimate by repeated squaring.

    Uses the norm sequence ``||A**(2**k)||_F ** (1/2**k)``, which
    decreases to the spectral radius, stopping once two successive
    estimates agree to ``rel_tol`` (at most 60 squarings). The iterate
    is renormalized each squaring with its log-magnitude tracked
    separately, so small radii do not underflow before the tolerance is
    reached; the estimates are the same as for plain squaring.

    Raises
    ------
    SpectralRadiusOverflowError
        If the (tracked) iterate magnitude exceeds 1e300, which means
        the radius is at least 1. The last finite estimate rides along
        on the exception.
    ValueError
        If ``rel_tol`` is outside (0, 1e-2] or ``a`` has non-finite
        entries.
    """
    a = _as_square(a)
    if not 0.0 < rel_tol <= 1e-2:
        raise ValueError(f"rel_tol must be in (0, 1e-2], got {rel_tol}")
    if a.shape[0] == 0:
        return 0.0
    norm0 = float(np.linalg.norm(a))
    if not np.isfinite(norm0):
        raise ValueError("matrix has non-finite entries")
    if norm0 == 0.0:
        return 0.0
    q = a / norm0
    log_mag = np.log(norm0)  # log ||A**(2**k)||_F for the current k
    est = norm0
    for k in range(1, _MAX_SQUARINGS + 1):
        q = q @ q
        qnorm = float(np.linalg.norm(q))
        if qnorm == 0.0:
            # a power vanished exactly, so the matrix is nilpotent
            return 0.0
        log_mag = 2.0 * log_mag + np.log(qnorm)
        if log_mag > _LOG_OVERFLOW:
            raise SpectralRadiusOverflowError(est)
        q = q / qnorm
        new_est = float(np.exp(log_mag / 2.0**k))
        if abs(new_est - est) <= rel_tol * max(new_est, est):
            return new_est
        est = new_est
    return est


def solve_discrete_lyapunov(m, q) -> np.ndarray:
    """Solve ``X = M* X M + Q`` by Smith's squaring iteration.

    The caller is responsible for ``spectral_radius(M) < 1``; the
    iteration doubles the number of summed terms each step and stops
    when the additive update drops below ``1e-14 * ||X||_F``.

    Raises
    ------
    LyapunovConvergenceError
        If the update has not converged after 200 iterations or the
        iterates stop being finite.
    """
    m = _as_square(m)
    q = np.asarray(q, dtype=complex)
    if q.shape != m.shape:
        raise ValueError(f"Q must have shape {m.shape}, got {q.shape}")
    if m.shape[0] == 0:
        return q.copy()
    x = q.copy()
    p = m.copy()
    for _ in range(_SMITH_MAX_ITER):
        update = p.conj().T @ x @ p
        x = x + update
        if not np.all(np.isfinite(x)):
            raise LyapunovConvergenceError(
                "iterates diverged; is the spectral radius below 1?"
            )
        if float(np.linalg.norm(update)) <= _SMITH_RTOL * float(np.linalg.norm(x)):
            # cheap re-hermitization against rounding drift
            return (x + x.conj().T) / 2.0
        p = p @ p
    raise LyapunovConvergenceError(
        f"no convergence within {_SMITH_MAX_ITER} iterations"
    )
