"""End-to-end acceptance battery.

One test per advertised guarantee. Each records a PASS/FAIL verdict
that the conftest terminal-summary hook prints as one line per
criterion at the end of the run, outside pytest's output capture.
Values are pinned against independently derived oracles (closed forms,
Taylor and quadrature sums, hand recursions) at fixed tolerances.
"""

import functools
import math

import numpy as np
import pytest

import mrsys
from mrsys.verify import sampler_identity_residual

from oracles import (
    REDUCIBLE_POOL,
    draw_stable,
    draw_system,
    ex42_down,
    g41,
    g41_lti,
    hs_sq_quadrature,
    hs_sq_taylor_g41,
    resolvent_point,
)

# (criterion number, verdict line) pairs, printed by the conftest hook
RESULTS = []


def criterion(number: int, summary: str):
    """Wrap a test so it records one PASS/FAIL verdict per criterion."""

    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                RESULTS.append((number, f"FAIL - {summary}"))
                raise
            RESULTS.append((number, f"PASS - {summary}"))

        return run

    return wrap


def block(mat, r, c, dy, du):
    return mat[r * dy : (r + 1) * dy, c * du : (c + 1) * du]


@criterion(1, "harmonic transfer matches the closed form at 16 grid points")
def test_transfer_closed_form_grid(ex41):
    for radius in (0.25, 0.5, 1.0, 1.5):
        for unit in (1.0, 1.0j, -1.0, -1.0j):
            z = radius * unit
            got = mrsys.harmonic_transfer(ex41, z).matrix
            want = g41(z)
            assert np.all(np.abs(got - want) <= 1e-10 * np.abs(want))


@criterion(2, "both reduction variants give the expected time-invariant "
               "transfer with poles at +/-2")
def test_lti_reduction_transfer_and_poles(ex41):
    points = (0.1, -0.4, 0.9j, -1.5j, 1.2, 0.5 + 0.5j, -0.7 + 0.3j,
              1.1 - 0.6j, 0.25 - 0.9j, -1.6)
    for variant in (1, 2):
        red = mrsys.optimal_approximant(ex41, 2, variant=variant)
        assert (red.m, red.n) == (1, 1) and red.state_dim == 2
        for z in points:
            got = mrsys.harmonic_transfer(red, z).matrix[0, 0]
            want = g41_lti(z)
            assert abs(got - want) <= 1e-10 * abs(want)
        for pole in (2.0, -2.0):
            assert not mrsys.in_harmonic_resolvent(red, pole)
            assert mrsys.in_harmonic_resolvent(red, 1.001 * pole)
            assert mrsys.in_harmonic_resolvent(red, 0.999 * pole)


@criterion(3, "modulated fixture reduces to the exact rational operators "
               "and the decimated transfer formula")
def test_modulated_fixture_reduction(ex42):
    red = mrsys.optimal_approximant(ex42, 2, variant=1)
    assert (red.m, red.n) == (1, 2) and red.state_dim == 4
    eye2, zero2 = np.eye(2), np.zeros((2, 2))
    want_a = (
        np.block([[zero2, -1j * eye2], [eye2, zero2]]),
        np.block([[zero2, 1j * eye2], [eye2, zero2]]),
    )
    want_b = np.array([[1.0], [0.0], [0.0], [0.0]])
    want_c = np.array([[1.0, 0.0, 0.0, 0.0]])
    want_d = (np.array([[0.5]]), np.array([[0.0]]))
    exact_set = np.array([0.0, 1.0, -1.0, 1.0j, -1.0j, 0.5])
    for t in range(2):
        pairs = (
            (red.A[t], want_a[t]),
            (red.B[t], want_b),
            (red.C[t], want_c),
            (red.D[t], want_d[t]),
        )
        for got, want in pairs:
            assert np.max(np.abs(got - want)) <= 1e-13
            # every entry sits on the advertised exact value grid
            off_grid = np.min(np.abs(got[..., np.newaxis] - exact_set), axis=-1)
            assert np.max(off_grid) <= 1e-13
    for z in (0.0, 1.0, 0.5j, 0.3 - 0.2j):
        got = mrsys.harmonic_transfer(red, z).matrix
        np.testing.assert_allclose(got, ex42_down(z), rtol=1e-10, atol=1e-10)


@criterion(4, "norm and distance agree with two independent oracles and "
               "the norm splits by the optimality identity")
def test_norms_against_oracles_and_pythagoras(ex41, rng):
    taylor = hs_sq_taylor_g41()
    quadrature = hs_sq_quadrature(lambda z: g41(z)[:, :1])
    assert taylor == pytest.approx(1232.0 / 15.0, rel=1e-10)
    assert quadrature == pytest.approx(1232.0 / 15.0, rel=1e-9)
    for method in ("series", "lyapunov", "both"):
        value = mrsys.hs_norm(ex41, method=method).value
        assert value == pytest.approx(math.sqrt(taylor), rel=1e-7)
    red = mrsys.optimal_approximant(ex41, 2)
    gap = mrsys.hs_distance(ex41, red).value
    assert gap == pytest.approx(math.sqrt(976.0 / 15.0), rel=1e-7)
    done = 0
    while done < 50:
        s = draw_stable(rng, pool=REDUCIBLE_POOL)
        c = s.rate_gcd
        divisors = [d for d in range(2, c + 1) if c % d == 0]
        q = int(rng.choice(divisors))
        part = mrsys.optimal_approximant(s, q)
        whole_sq = mrsys.hs_norm(s).value ** 2
        split = mrsys.hs_distance(s, part).value ** 2 + mrsys.hs_norm(part).value ** 2
        assert abs(split - whole_sq) <= 1e-7 * whole_sq
        done += 1


@criterion(5, "sampling and coefficient-analysis identities hold on 200 draws")
def test_sampler_identity_battery(rng):
    for _ in range(200):
        period = int(rng.integers(1, 9))
        q = int(rng.integers(1, 5))
        dim = int(rng.integers(1, 4))
        r = float(rng.uniform(0.3, 1.5))
        phi = float(rng.uniform(0.0, 2.0 * np.pi))
        z = complex(r * np.cos(phi), r * np.sin(phi))
        assert sampler_identity_residual(rng, period, q, dim, z) <= 1e-12


@criterion(6, "steady-state regimes track the simulated recursion on 100 "
               "random stable systems")
def test_steady_state_oracle_battery(rng):
    done = 0
    while done < 100:
        s = draw_stable(rng)
        lifted = mrsys.lift(s)
        try:
            z = resolvent_point(lifted, rng)
        except RuntimeError:
            continue
        shape = (s.n, s.input_dim)
        u = mrsys.EmpCoefficients(
            s.n,
            z**s.up_factor,
            rng.standard_normal(shape) + 1j * rng.standard_normal(shape),
        )
        ss = mrsys.emp_steady_state(s, z, u)
        # the coefficient stacks solve the lifted equations
        want_hat = mrsys.harmonic_transfer(lifted, z).matrix @ u.flat()
        hat_scale = max(1.0, float(np.max(np.abs(want_hat))))
        assert np.max(np.abs(ss.outputs.flat() - want_hat)) <= 1e-8 * hat_scale
        # and the regime is reproduced by plain simulation over 3 periods
        steps = 3 * s.period
        u_seq = mrsys.emp_synthesize(ss.inputs, range(3 * s.n))
        trace = mrsys.simulate(s, ss.initial_state, u_seq, steps)
        want = mrsys.emp_synthesize(ss.outputs, range(len(trace.outputs))).values
        scale = max(1.0, float(np.max(np.abs(want))))
        assert np.max(np.abs(trace.outputs.values - want)) <= 1e-8 * scale
        done += 1


@criterion(7, "block rotation structure, first-column reconstruction, and "
               "the inflation embedding hold on 50 random systems")
def test_transfer_structure_battery(rng):
    done = 0
    while done < 50:
        s = draw_system(rng)
        lifted = mrsys.lift(s)
        eps = mrsys.unit_root(s.period, 1)
        try:
            z = resolvent_point(lifted, rng, hi=1.0)
        except RuntimeError:
            continue
        if not mrsys.in_harmonic_resolvent(lifted, eps * z):
            continue
        g = mrsys.harmonic_transfer(lifted, z).matrix
        g_up = mrsys.harmonic_transfer(lifted, eps * z).matrix
        dy, du = s.output_dim, s.input_dim
        scale = max(1.0, float(np.max(np.abs(g))))
        for r in range(s.m):
            for c in range(s.n):
                lhs = block(g_up, (r + 1) % s.m, (c + 1) % s.n, dy, du)
                rhs = block(g, r, c, dy, du)
                assert np.max(np.abs(lhs - rhs)) <= 1e-9 * scale
        rebuilt = 0
        for c in range(s.n):
            zc = z / eps**c
            if not mrsys.in_harmonic_resolvent(lifted, zc):
                continue
            col = mrsys.harmonic_transfer(lifted, zc).matrix
            for r in range(s.m):
                want = block(col, (r - c) % s.m, 0, dy, du)
                got = block(g, r, c, dy, du)
                assert np.max(np.abs(got - want)) <= 1e-9 * scale
            rebuilt += 1
        assert rebuilt >= 1
        try:
            g2 = mrsys.transfer_at_period(s, 2, z).matrix
        except mrsys.NotInResolventError:
            continue
        up_in = mrsys.upsample_matrix(2, s.n, du)
        up_out = mrsys.upsample_matrix(2, s.m, dy)
        assert np.max(np.abs(g2 @ up_in - up_out @ g)) <= 1e-10 * scale
        done += 1


@criterion(8, "delaying the input by one full period shifts the output "
               "exactly on 100 random systems")
def test_characteristic_condition_battery(rng):
    for _ in range(100):
        s = draw_system(rng)
        m, n, T = s.m, s.n, s.period
        length = int(rng.integers(1, 2 * n + 1))
        shape = (length, s.input_dim)
        u_vals = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        u = mrsys.VectorSequence(u_vals, 0)
        delayed = mrsys.VectorSequence(
            np.vstack([np.zeros((n, s.input_dim)), u_vals]), 0
        )
        steps = 3 * T
        y = mrsys.simulate(s, None, u, steps).outputs.values
        y_del = mrsys.simulate(s, None, delayed, steps).outputs.values
        assert np.max(np.abs(y_del[:m])) <= 1e-12
        overlap = len(y_del) - m
        assert np.max(np.abs(y_del[m:] - y[:overlap])) <= 1e-12


@criterion(9, "shifting the time origin by the rate product conjugates the "
               "transfer by port modulations on 50 random systems")
def test_origin_shift_conjugation_battery(rng):
    done = 0
    while done < 50:
        s = draw_system(rng)
        lifted = mrsys.lift(s)
        try:
            z = resolvent_point(lifted, rng)
        except RuntimeError:
            continue
        p, q = s.up_factor, s.down_factor
        shifted = mrsys.shift_origin(s, p * q)
        try:
            g_shift = mrsys.harmonic_transfer(shifted, z).matrix
        except mrsys.NotInResolventError:
            continue
        g = mrsys.harmonic_transfer(lifted, z).matrix
        n_out = np.linalg.matrix_power(
            mrsys.modulation_matrix(s.m, s.output_dim), p % s.m
        )
        n_in = np.linalg.matrix_power(
            mrsys.modulation_matrix(s.n, s.input_dim), (-q) % s.n
        )
        scale = max(1.0, float(np.max(np.abs(g))))
        assert np.max(np.abs(g_shift - n_out @ g @ n_in)) <= 1e-9 * scale
        done += 1


@criterion(10, "the reduction is locally optimal and matches the brute-force "
                "first-column projection")
def test_local_optimality_and_projection(ex41, rng):
    red = mrsys.optimal_approximant(ex41, 2)
    base = mrsys.hs_distance(ex41, red).value
    operators = (red.A, red.B, red.C, red.D)
    for _ in range(50):
        which = int(rng.integers(0, 4))
        t = int(rng.integers(0, red.period))
        mats = [list(op) for op in operators]
        shape = mats[which][t].shape
        delta = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        delta *= 1e-2 / np.linalg.norm(delta)
        mats[which][t] = mats[which][t] + delta
        bumped = mrsys.MultirateSystem(
            red.m, red.n, red.state_dim, red.input_dim, red.output_dim,
            tuple(mats[0]), tuple(mats[1]), tuple(mats[2]), tuple(mats[3]),
        )
        assert mrsys.hs_distance(ex41, bumped).value >= base - 1e-9

    # brute force: on the original block grid the reduced transfer keeps
    # exactly the first-column blocks whose row index is a multiple of q
    for m, n, chat in ((4, 8, 2), (6, 12, 4)):
        s = draw_stable(rng, pool=[(m, n)])
        target = mrsys.reduce_target(s.rate_gcd, chat)
        q = target.q
        part = mrsys.optimal_approximant(s, q)
        lifted = mrsys.lift(s)
        while True:
            z = resolvent_point(lifted, rng)
            try:
                inflated = mrsys.transfer_at_period(part, q, z).matrix
                break
            except mrsys.NotInResolventError:
                continue
        g = mrsys.harmonic_transfer(lifted, z).matrix
        dy, du = s.output_dim, s.input_dim
        scale = max(1.0, float(np.max(np.abs(g))))
        for r in range(s.m):
            got = block(inflated, r, 0, dy, du)
            want = block(g, r, 0, dy, du) if r % q == 0 else 0.0
            assert np.max(np.abs(got - want)) <= 1e-8 * scale
        direct = mrsys.downsampled_transfer(s, q, z)
        got = mrsys.harmonic_transfer(part, z).matrix
        assert np.max(np.abs(got - direct)) <= 1e-8 * scale
