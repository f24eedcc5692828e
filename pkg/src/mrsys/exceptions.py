"""Exception types shared across the package.

Keeping these in one place lets the command line layer map each failure
mode to a stable exit code without string matching.
"""


class MrsysError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrixError(MrsysError):
    """Linear solve hit a pivot below the singularity threshold."""

    def __init__(self, pivot: float, threshold: float):
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(
            f"matrix is singular to working precision "
            f"(smallest pivot {pivot:.3e}, threshold {threshold:.3e})"
        )


class SpectralRadiusOverflowError(MrsysError):
    """Power iterates blew past the overflow guard, so the radius is >= 1.

    ``estimate`` carries the last finite Gelfand estimate (a lower bound
    on the true spectral radius at that point of the iteration).
    """

    def __init__(self, estimate: float):
        self.estimate = estimate
        super().__init__(
            f"spectral radius at least 1: iterate norms exceeded 1e300 "
            f"(last estimate {estimate:.6g})"
        )


class LyapunovConvergenceError(MrsysError):
    """Smith iteration did not converge within the iteration cap."""


class MisalignedSequenceError(MrsysError):
    """Sequence start index is incompatible with the requested resampling."""


class DimensionMismatchError(MrsysError):
    """Operand dimensions do not line up."""


class IncompatibleSystemsError(MrsysError):
    """Two systems cannot be combined (rate ratio or port dimensions differ)."""


class NotInResolventError(MrsysError):
    """Evaluation point is (numerically) outside the harmonic resolvent set."""

    def __init__(self, z: complex, sigma_min: float, threshold: float):
        self.z = z
        self.sigma_min = sigma_min
        self.threshold = threshold
        super().__init__(
            f"z = {z} is not in the harmonic resolvent set: "
            f"smallest singular value {sigma_min:.3e} <= threshold {threshold:.3e}"
        )


class UnstableSystemError(MrsysError):
    """System fails the stability gate needed for a finite Hilbert-Schmidt norm."""

    def __init__(self, spectral_radius: float):
        self.spectral_radius = spectral_radius
        super().__init__(
            f"system is not exponentially stable enough for a finite norm "
            f"(spectral radius estimate {spectral_radius:.8g} >= 1 - 1e-8)"
        )


class NotDivisorError(MrsysError):
    """A period-reduction factor must divide the quantity it reduces."""


class BadTargetError(MrsysError):
    """Requested approximation target is out of range."""


class SystemFileError(MrsysError):
    """System file is malformed (syntax, schema, shapes, or non-finite data)."""
