"""Self-check batteries for one system.

Each property either passes, fails with a diagnostic, or is skipped
when it does not apply (for example norm checks on an unstable
system). The batteries are deterministic for a fixed seed.
"""

from dataclasses import dataclass
from math import ceil

import numpy as np

from .approx import hs_distance, hs_norm, optimal_approximant
from .exceptions import UnstableSystemError
from .files import system_from_json_dict, system_to_json_dict
from .lifting import (
    LiftedSystem,
    _resolvent_margin,
    detect_shorter_period,
    emp_steady_state,
    fourier_coefficients,
    harmonic_transfer,
    in_harmonic_resolvent,
    lift,
    toeplitz_transform,
    transfer_at_period,
)
from .signals import (
    EmpCoefficients,
    VectorSequence,
    cyclic_shift,
    downsample,
    downsample_matrix,
    emp_analyze,
    emp_synthesize,
    modulation_matrix,
    replication_matrix,
    unit_root,
    upsample,
    upsample_matrix,
)
from .system import MultirateSystem, shift_origin, simulate, validate


@dataclass(frozen=True)
class PropertyResult:
    name: str
    status: str  # "pass" | "fail" | "skip"
    detail: str = ""


class _Skip(Exception):
    pass


def _check(condition: bool, message: str):
    if not condition:
        raise AssertionError(message)


def _complex_normal(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _random_annulus(rng, lo=0.4, hi=1.1) -> complex:
    r = rng.uniform(lo, hi)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(phi), r * np.sin(phi))


def _resolvent_point(lifted: LiftedSystem, rng, lo=0.4, hi=1.1) -> complex:
    for _ in range(64):
        z = _random_annulus(rng, lo, hi)
        if in_harmonic_resolvent(lifted, z):
            return z
    raise _Skip("no resolvent point found in the sampling annulus")


def _check_round_trip(sys: MultirateSystem) -> str:
    rebuilt = system_from_json_dict(system_to_json_dict(sys))
    _check(
        (rebuilt.m, rebuilt.n) == (sys.m, sys.n)
        and rebuilt.state_dim == sys.state_dim
        and rebuilt.input_dim == sys.input_dim
        and rebuilt.output_dim == sys.output_dim,
        "header fields changed in the round trip",
    )
    for name in ("A", "B", "C", "D"):
        for t, (left, right) in enumerate(zip(getattr(sys, name), getattr(rebuilt, name))):
            _check(
                np.array_equal(left, right),
                f"{name}[{t}] not bit-identical after round trip",
            )
    return "bit-exact"


def _check_validation(sys: MultirateSystem) -> str:
    report = validate(sys)
    _check(report.ok, "; ".join(report.violations) or "invalid")
    return f"minimal rate pair {report.minimal_pair}"


def sampler_identity_residual(rng, period: int, q: int, dim: int, z: complex) -> float:
    """Largest residual (relative to the sample norm) of the four
    up/downsampling vs. coefficient-analysis identities on one random
    signal window."""
    T, big = period, period * q
    worst = 0.0

    def track(lhs, rhs, scale):
        nonlocal worst
        worst = max(worst, float(np.linalg.norm(lhs - rhs)) / max(scale, 1e-300))

    # analysis of an upsampled window vs replicated coefficients
    v = VectorSequence(_complex_normal(rng, T, dim), 0)
    lifted_up = VectorSequence(upsample(v, q).window(0, big), 0)
    track(
        emp_analyze(lifted_up, z, big).flat(),
        replication_matrix(T, 1.0, q, dim) @ emp_analyze(v, z**q, T).flat() / q,
        v.norm(),
    )
    # analysis of a downsampled window vs folded coefficients
    w = VectorSequence(_complex_normal(rng, big, dim), 0)
    track(
        emp_analyze(downsample(w, q), z**q, T).flat(),
        replication_matrix(T, 1.0, q, dim).conj().T @ emp_analyze(w, z, big).flat(),
        w.norm(),
    )
    # upsampled coefficients vs analysis of the modulated extension
    ext = replication_matrix(T, 1.0 / z, q, dim) @ v.values.reshape(-1)
    track(
        upsample_matrix(q, T, dim) @ emp_analyze(v, z, T).flat(),
        emp_analyze(VectorSequence(ext.reshape(big, dim), 0), z, big).flat(),
        v.norm(),
    )
    # downsampled coefficients vs analysis of the folded window
    fold = replication_matrix(T, np.conj(z), q, dim).conj().T @ w.values.reshape(-1)
    track(
        downsample_matrix(q, T, dim) @ emp_analyze(w, z, big).flat(),
        emp_analyze(VectorSequence(fold.reshape(T, dim), 0), z, T).flat() / q,
        w.norm(),
    )
    return worst


def _check_sampler(rng, trials: int) -> str:
    worst = 0.0
    for _ in range(max(trials, 8)):
        T = int(rng.integers(1, 7))
        q = int(rng.integers(1, 5))
        dim = int(rng.integers(1, 4))
        z = _random_annulus(rng, 0.4, 1.4)
        worst = max(worst, sampler_identity_residual(rng, T, q, dim, z))
    _check(worst <= 1e-12, f"identity residual {worst:.3e} above 1e-12")
    return f"max residual {worst:.2e}"


def _check_shift_commutation(sys: MultirateSystem) -> str:
    T = sys.period
    dims = {
        "A": (sys.state_dim, sys.state_dim),
        "B": (sys.state_dim, sys.input_dim),
        "C": (sys.output_dim, sys.state_dim),
        "D": (sys.output_dim, sys.input_dim),
    }
    for name, (rows, cols) in dims.items():
        t_mat = toeplitz_transform(getattr(sys, name))
        left = cyclic_shift(T, rows, 1) @ t_mat
        right = t_mat @ cyclic_shift(T, cols, 1)
        _check(np.array_equal(left, right), f"{name}: shift commutation not exact")
    mod = modulation_matrix(T, sys.state_dim)
    shift = cyclic_shift(T, sys.state_dim, 1)
    drift = float(
        np.max(np.abs(shift @ mod - unit_root(T, 1) * (mod @ shift)), initial=0.0)
    )
    _check(drift <= 1e-15 * T, f"modulation twist drift {drift:.3e}")
    return "exact"


def _check_band_structure(sys: MultirateSystem) -> str:
    T = sys.period
    divisors = [q for q in range(1, T + 1) if T % q == 0]
    for q in divisors:
        claimed = detect_shorter_period(sys, q)
        banded = True
        for name in ("A", "B", "C", "D"):
            coeffs = fourier_coefficients(getattr(sys, name))
            scale = 1.0 + max(
                (float(np.max(np.abs(c), initial=0.0)) for c in coeffs), default=0.0
            )
            for k, coeff in enumerate(coeffs):
                if k % q != 0 and float(np.max(np.abs(coeff), initial=0.0)) > 1e-10 * scale:
                    banded = False
        _check(
            claimed == banded,
            f"period check and band support disagree for factor {q}",
        )
    return f"checked factors {divisors}"


def _check_resolvent_rotation(sys: MultirateSystem, lifted: LiftedSystem, rng) -> str:
    if sys.state_dim == 0:
        raise _Skip("no state")
    eps = lifted.root
    worst = 0.0
    for _ in range(8):
        z = _random_annulus(rng, 0.3, 1.3)
        s0, _ = _resolvent_margin(lifted, z)
        s1, _ = _resolvent_margin(lifted, eps * z)
        worst = max(worst, abs(s1 - s0) / (1.0 + s0))
    _check(worst <= 1e-8, f"rotation symmetry broken by {worst:.3e}")
    return f"max deviation {worst:.2e}"


def _check_transfer_structure(sys: MultirateSystem, lifted: LiftedSystem, rng) -> str:
    m, n = sys.m, sys.n
    dy, du = sys.output_dim, sys.input_dim
    eps = lifted.root
    z = _resolvent_point(lifted, rng)
    base = harmonic_transfer(lifted, z).matrix
    scale = 1.0 + float(np.linalg.norm(base))
    rotated = harmonic_transfer(lifted, eps * z).matrix
    for k in range(m):
        for l in range(n):
            got = rotated[
                ((k + 1) % m) * dy : ((k + 1) % m + 1) * dy,
                ((l + 1) % n) * du : ((l + 1) % n + 1) * du,
            ]
            want = base[k * dy : (k + 1) * dy, l * du : (l + 1) * du]
            _check(
                float(np.max(np.abs(got - want), initial=0.0)) <= 1e-9 * scale,
                f"rotation relation fails at block ({k}, {l})",
            )
    # whole matrix from first block columns at rotated points
    rebuilt = np.zeros_like(base)
    for l in range(n):
        col = harmonic_transfer(lifted, z * unit_root(lifted.period, -l)).matrix[:, :du]
        for k in range(m):
            rebuilt[k * dy : (k + 1) * dy, l * du : (l + 1) * du] = col[
                ((k - l) % m) * dy : ((k - l) % m + 1) * dy, :
            ]
    err = float(np.max(np.abs(rebuilt - base), initial=0.0))
    _check(err <= 1e-9 * scale, f"first-column reconstruction off by {err:.3e}")
    return f"block relations hold at z = {z:.3f}"


def _check_steady_state(sys: MultirateSystem, lifted: LiftedSystem, rng) -> str:
    if sys.input_dim == 0:
        raise _Skip("no input port")
    p, T = sys.up_factor, sys.period
    z = _resolvent_point(lifted, rng, 0.6, 1.1)
    coeffs = EmpCoefficients(sys.n, z**p, _complex_normal(rng, sys.n, sys.input_dim))
    regime = emp_steady_state(sys, z, coeffs)
    steps = 3 * T
    u = emp_synthesize(regime.inputs, range(ceil(steps / p)))
    trace = simulate(sys, regime.initial_state, u, steps)
    y_want = emp_synthesize(regime.outputs, range(len(trace.outputs))).values
    x_want = emp_synthesize(regime.states, range(steps + 1)).values
    y_err = float(np.linalg.norm(trace.outputs.values - y_want))
    x_err = float(np.linalg.norm(trace.states.values - x_want))
    y_scale = 1.0 + float(np.linalg.norm(y_want))
    x_scale = 1.0 + float(np.linalg.norm(x_want))
    _check(y_err <= 1e-8 * y_scale, f"output drifts from the regime by {y_err:.3e}")
    _check(x_err <= 1e-8 * x_scale, f"state drifts from the regime by {x_err:.3e}")
    return f"3 periods tracked at z = {z:.3f}"


def _check_characteristic(sys: MultirateSystem, rng, trials: int) -> str:
    if sys.input_dim == 0:
        raise _Skip("no input port")
    p, q, T = sys.up_factor, sys.down_factor, sys.period
    window = max(2 * T, 8)
    for _ in range(max(trials // 5, 4)):
        body = _complex_normal(rng, window, sys.input_dim)
        u = VectorSequence(
            np.vstack([np.zeros((sys.n, sys.input_dim)), body]), 0
        )
        u_adv = VectorSequence(body, 0)
        steps = p * (sys.n + window) + T
        y = simulate(sys, None, u, steps).outputs.values
        y_adv = simulate(sys, None, u_adv, steps).outputs.values
        overlap = min(len(y_adv), len(y) - sys.m)
        scale = 1.0 + float(np.max(np.abs(y), initial=0.0))
        err = float(
            np.max(np.abs(y_adv[:overlap] - y[sys.m : sys.m + overlap]), initial=0.0)
        )
        _check(
            err <= 1e-12 * scale,
            f"advancing the input by n did not advance the output by m ({err:.3e})",
        )
    return "input/output shift coupling holds"


def _check_inflation(sys: MultirateSystem, lifted: LiftedSystem, rng) -> str:
    z = _resolvent_point(lifted, rng)
    base = harmonic_transfer(lifted, z).matrix
    big = transfer_at_period(sys, 2, z).matrix
    up_in = upsample_matrix(2, sys.n, sys.input_dim)
    up_out = upsample_matrix(2, sys.m, sys.output_dim)
    err = float(np.max(np.abs(big @ up_in - up_out @ base), initial=0.0))
    _check(err <= 1e-10 * (1.0 + float(np.linalg.norm(base))), f"inflation residual {err:.3e}")
    return "doubled presentation interlaces the original transfer"


def _check_origin_shift(sys: MultirateSystem, lifted: LiftedSystem, rng) -> str:
    p, q = sys.up_factor, sys.down_factor
    z = _resolvent_point(lifted, rng)
    base = harmonic_transfer(lifted, z).matrix
    shifted = harmonic_transfer(shift_origin(sys, p * q), z).matrix
    mod_out = np.linalg.matrix_power(modulation_matrix(sys.m, sys.output_dim), p)
    mod_in = np.linalg.matrix_power(
        modulation_matrix(sys.n, sys.input_dim), (-q) % sys.n
    )
    err = float(np.max(np.abs(shifted - mod_out @ base @ mod_in), initial=0.0))
    _check(err <= 1e-9 * (1.0 + float(np.linalg.norm(base))), f"conjugation residual {err:.3e}")
    return "origin shift acts by port modulations"


def _check_norm_agreement(sys: MultirateSystem) -> str:
    try:
        report = hs_norm(sys, method="both")
    except UnstableSystemError as exc:
        raise _Skip(f"unstable ({exc.spectral_radius:.4g})") from exc
    return f"value {report.value:.8g} from {report.terms_used} series terms"


def _smallest_prime_factor(v: int) -> int:
    for f in range(2, v + 1):
        if v % f == 0:
            return f
    return v


def _perturbed(sys: MultirateSystem, rng, scale: float) -> MultirateSystem:
    name = ("A", "B", "C", "D")[int(rng.integers(0, 4))]
    t = int(rng.integers(0, sys.period))
    seq = list(getattr(sys, name))
    if seq[t].size == 0:
        return _perturbed(sys, rng, scale)
    delta = _complex_normal(rng, *seq[t].shape)
    delta *= scale / max(float(np.linalg.norm(delta)), 1e-300)
    seq[t] = seq[t] + delta
    parts = {n: getattr(sys, n) for n in ("A", "B", "C", "D")}
    parts[name] = tuple(seq)
    return MultirateSystem(
        sys.m, sys.n, sys.state_dim, sys.input_dim, sys.output_dim,
        parts["A"], parts["B"], parts["C"], parts["D"],
    )


def _check_pythagoras(sys: MultirateSystem, lifted: LiftedSystem, rng, trials: int) -> str:
    c = sys.rate_gcd
    if c == 1:
        raise _Skip("rate pair already coprime")
    try:
        total = hs_norm(sys, method="lyapunov")
    except UnstableSystemError as exc:
        raise _Skip(f"unstable ({exc.spectral_radius:.4g})") from exc
    q = _smallest_prime_factor(c)
    best = optimal_approximant(sys, q, variant=1)
    alt = optimal_approximant(sys, q, variant=2)
    z = _resolvent_point(lifted, rng)
    t1 = harmonic_transfer(best, z).matrix
    t2 = harmonic_transfer(alt, z).matrix
    _check(
        float(np.max(np.abs(t1 - t2), initial=0.0))
        <= 1e-9 * (1.0 + float(np.linalg.norm(t1))),
        "construction variants disagree",
    )
    dist = hs_distance(sys, best, method="lyapunov")
    part = hs_norm(best, method="lyapunov")
    gap = abs(dist.value**2 + part.value**2 - total.value**2)
    _check(
        gap <= 1e-7 * total.value**2,
        f"energy split violated by {gap:.3e}",
    )
    for _ in range(min(trials, 8)):
        rival = _perturbed(best, rng, 1e-2)
        worse = hs_distance(sys, rival, method="lyapunov")
        _check(
            worse.value >= dist.value - 1e-9,
            f"perturbed candidate beat the approximant "
            f"({worse.value:.12g} < {dist.value:.12g})",
        )
    return (
        f"norm {total.value:.6g} splits into distance {dist.value:.6g} "
        f"and approximant {part.value:.6g}"
    )


def run_verification(sys: MultirateSystem, trials: int = 50, seed: int = 0) -> list:
    """Run every applicable property battery against one system."""
    rng = np.random.default_rng(seed)
    report = validate(sys)
    lifted = lift(sys) if report.ok else None
    checks = [
        ("file-round-trip", lambda: _check_round_trip(sys)),
        ("validation", lambda: _check_validation(sys)),
        ("sampler-identities", lambda: _check_sampler(rng, trials)),
        ("toeplitz-shift-commutation", lambda: _check_shift_commutation(sys)),
        ("toeplitz-band-structure", lambda: _check_band_structure(sys)),
        ("resolvent-rotation", lambda: _check_resolvent_rotation(sys, lifted, rng)),
        ("transfer-structure", lambda: _check_transfer_structure(sys, lifted, rng)),
        ("steady-state-oracle", lambda: _check_steady_state(sys, lifted, rng)),
        ("characteristic-condition", lambda: _check_characteristic(sys, rng, trials)),
        ("inflation-identity", lambda: _check_inflation(sys, lifted, rng)),
        ("origin-shift-rotation", lambda: _check_origin_shift(sys, lifted, rng)),
        ("norm-method-agreement", lambda: _check_norm_agreement(sys)),
        ("approximation-pythagoras", lambda: _check_pythagoras(sys, lifted, rng, trials)),
    ]
    results = []
    for name, fn in checks:
        if lifted is None and name not in ("file-round-trip", "validation"):
            results.append(PropertyResult(name, "skip", "system fails validation"))
            continue
        try:
            detail = fn() or ""
            results.append(PropertyResult(name, "pass", detail))
        except _Skip as reason:
            results.append(PropertyResult(name, "skip", str(reason)))
        except Exception as exc:  # noqa: BLE001 - report, do not crash the battery
            results.append(PropertyResult(name, "fail", str(exc)))
    return results
