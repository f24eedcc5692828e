import numpy as np
import pytest

import mrsys
from oracles import draw_stable, draw_system


def _impulse(dim=1):
    vals = np.zeros((1, dim), dtype=complex)
    vals[0, 0] = 1.0
    return mrsys.VectorSequence(vals, 0)


class TestConstruction:
    def test_rate_bookkeeping(self, ex42):
        assert (ex42.m, ex42.n) == (2, 4)
        assert ex42.rate_gcd == 2
        assert ex42.up_factor == 1
        assert ex42.down_factor == 2
        assert ex42.period == 4
        # p*n = q*m = lcm(m, n) for every drawn pair
        rng = np.random.default_rng(0)
        for _ in range(20):
            s = draw_system(rng)
            assert s.up_factor * s.n == s.down_factor * s.m == s.period

    def test_bad_rates_rejected(self, ex41):
        with pytest.raises(ValueError):
            mrsys.MultirateSystem(0, 2, 1, 1, 1, ex41.A, ex41.B, ex41.C, ex41.D)
        with pytest.raises(ValueError):
            mrsys.MultirateSystem(2, 2, -1, 1, 1, ex41.A, ex41.B, ex41.C, ex41.D)

    def test_construction_is_lenient_about_lists(self, ex41):
        # malformed operator data constructs fine; validate reports it
        sys = mrsys.MultirateSystem(
            2, 2, 1, 1, 1, ex41.A, ex41.B + (np.eye(1),), ex41.C, ex41.D
        )
        assert not mrsys.validate(sys).ok


class TestValidate:
    def test_fixture_systems_are_clean(self, ex41, ex42):
        assert mrsys.validate(ex41).ok
        assert mrsys.validate(ex42).ok

    def test_minimal_pair_on_fixtures(self, ex41, ex42):
        assert mrsys.validate(ex41).minimal_pair == (2, 2)
        assert mrsys.validate(ex42).minimal_pair == (2, 4)

    def test_tiled_system_reports_smaller_pair(self, ex41):
        doubled = mrsys.reperiodize(ex41, 2)
        report = mrsys.validate(doubled)
        assert report.ok
        assert report.minimal_pair == (2, 2)
        assert mrsys.minimal_multirate_pair(doubled) == (2, 2)

    def test_length_violation_is_reported_not_raised(self, ex41):
        sys = mrsys.MultirateSystem(
            2, 2, 1, 1, 1, ex41.A, ex41.B + (np.eye(1),), ex41.C, ex41.D
        )
        report = mrsys.validate(sys)
        assert any("expected 2 matrices" in v for v in report.violations)
        assert report.minimal_pair is None

    def test_shape_violation_names_the_entry(self, ex41):
        bad_c = (np.ones((1, 2)), np.ones((1, 2)))
        report = mrsys.validate(
            mrsys.MultirateSystem(2, 2, 1, 1, 1, ex41.A, ex41.B, bad_c, ex41.D)
        )
        assert any(v.startswith("C[0]") for v in report.violations)

    def test_nonfinite_entries_reported(self, ex41):
        bad_a = (np.array([[np.nan]]), ex41.A[1])
        report = mrsys.validate(
            mrsys.MultirateSystem(2, 2, 1, 1, 1, bad_a, ex41.B, ex41.C, ex41.D)
        )
        assert any("non-finite" in v for v in report.violations)


class TestSimulate:
    def test_impulse_response_by_hand(self, ex41):
        # y0 = D0 = 0, x1 = B0 = 2, y1 = C1 x1 = 6,
        # x2 = A1 x1 = 1, y2 = C0 x2 = -1, x3 = 1/2, y3 = 3/2
        trace = mrsys.simulate(ex41, None, _impulse(), 4)
        np.testing.assert_allclose(
            trace.outputs.values.ravel(), [0.0, 6.0, -1.0, 1.5], atol=1e-15
        )
        np.testing.assert_allclose(
            trace.states.values.ravel(), [0.0, 2.0, 1.0, 0.5, 0.25], atol=1e-15
        )

    def test_zero_everything(self, ex41):
        trace = mrsys.simulate(
            ex41, np.zeros(1), mrsys.VectorSequence(np.zeros((3, 1))), 6
        )
        assert trace.outputs.norm() == 0.0
        assert trace.states.norm() == 0.0

    def test_output_is_downsampled_central_output(self, ex42, rng):
        u = mrsys.VectorSequence(rng.standard_normal((6, 1)), 0)
        trace = mrsys.simulate(ex42, rng.standard_normal(2), u, 12)
        slow = trace.outputs.values
        central = trace.central_outputs.values
        np.testing.assert_array_equal(slow, central[::2])

    def test_central_input_is_upsampled(self, rng):
        s = draw_system(rng, pool=[(6, 4)])
        u = mrsys.VectorSequence(rng.standard_normal((4, s.input_dim)), 0)
        trace = mrsys.simulate(s, None, u, 9)
        p = s.up_factor  # 3 here
        grid = trace.central_inputs.values
        np.testing.assert_array_equal(grid[::p][: len(u)], u.values[:3])
        mask = np.ones(len(grid), dtype=bool)
        mask[::p] = False
        assert np.all(grid[mask] == 0.0)

    def test_dimension_errors(self, ex41):
        with pytest.raises(mrsys.DimensionMismatchError):
            mrsys.simulate(ex41, np.zeros(2), _impulse(), 4)
        with pytest.raises(mrsys.DimensionMismatchError):
            mrsys.simulate(ex41, None, _impulse(dim=2), 4)
        with pytest.raises(ValueError):
            mrsys.simulate(ex41, None, mrsys.VectorSequence([1.0], start=1), 4)

    def test_trace_records_initial_state(self, ex41):
        trace = mrsys.simulate(ex41, [2.0], _impulse(), 3)
        np.testing.assert_array_equal(trace.initial_state, [2.0])


class TestReperiodize:
    def test_identity_factor(self, ex41):
        assert mrsys.reperiodize(ex41, 1) is not ex41
        np.testing.assert_array_equal(mrsys.reperiodize(ex41, 1).B[1], ex41.B[1])

    def test_tiling_of_lists(self, ex41):
        doubled = mrsys.reperiodize(ex41, 2)
        assert (doubled.m, doubled.n) == (4, 4)
        assert doubled.period == 4
        np.testing.assert_array_equal(
            np.array([b[0, 0] for b in doubled.B]), [2.0, 6.0, 2.0, 6.0]
        )

    def test_simulation_is_bit_identical(self, rng):
        for _ in range(10):
            s = draw_system(rng)
            k = int(rng.integers(2, 4))
            u = mrsys.VectorSequence(
                rng.standard_normal((16, s.input_dim))
                + 1j * rng.standard_normal((16, s.input_dim)),
                0,
            )
            x0 = rng.standard_normal(s.state_dim)
            base = mrsys.simulate(s, x0, u, 64)
            tiled = mrsys.simulate(mrsys.reperiodize(s, k), x0, u, 64)
            np.testing.assert_array_equal(
                base.central_outputs.values, tiled.central_outputs.values
            )
            np.testing.assert_array_equal(base.outputs.values, tiled.outputs.values)

    def test_rejects_nonpositive_factor(self, ex41):
        with pytest.raises(ValueError):
            mrsys.reperiodize(ex41, 0)


class TestShiftOrigin:
    def test_trivial_shifts(self, ex41):
        for tau in (0, ex41.period, -ex41.period):
            shifted = mrsys.shift_origin(ex41, tau)
            for a, b in zip(shifted.B, ex41.B):
                np.testing.assert_array_equal(a, b)

    def test_rotation_by_one(self, ex41):
        shifted = mrsys.shift_origin(ex41, 1)
        assert [b[0, 0] for b in shifted.B] == [6.0, 2.0]
        assert [c[0, 0] for c in shifted.C] == [3.0, -1.0]

    def test_all_lists_rotate_together(self, rng):
        s = draw_system(rng, pool=[(4, 6)])
        T = s.period
        for tau in (1, 5, -2, T + 3):
            shifted = mrsys.shift_origin(s, tau)
            for t in range(T):
                np.testing.assert_array_equal(shifted.A[t], s.A[(t + tau) % T])
                np.testing.assert_array_equal(shifted.D[t], s.D[(t + tau) % T])


class TestDifference:
    def test_self_difference_is_silent(self, rng):
        s = draw_system(rng)
        d = mrsys.difference(s, s)
        u = mrsys.VectorSequence(rng.standard_normal((20, s.input_dim)), 0)
        trace = mrsys.simulate(d, None, u, 64)
        assert trace.outputs.norm() <= 1e-12

    def test_block_structure_and_common_rates(self, rng):
        a = draw_system(rng, pool=[(2, 2)])
        b_sys = mrsys.random_system(
            3, 3, 2, a.input_dim, a.output_dim, rng=rng
        )
        d = mrsys.difference(a, b_sys)
        assert (d.m, d.n) == (6, 6)
        assert d.state_dim == a.state_dim + 2
        assert d.rate_gcd == 6

    def test_trace_linearity(self, rng):
        for _ in range(5):
            a = draw_system(rng, pool=[(4, 6)])
            b_sys = mrsys.random_system(
                4, 6, 2, a.input_dim, a.output_dim, rng=rng
            )
            u = mrsys.VectorSequence(
                rng.standard_normal((30, a.input_dim)), 0
            )
            want = (
                mrsys.simulate(a, None, u, 64).outputs.values
                - mrsys.simulate(b_sys, None, u, 64).outputs.values
            )
            got = mrsys.simulate(mrsys.difference(a, b_sys), None, u, 64).outputs.values
            assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.max(np.abs(want)))

    def test_incompatible_inputs_rejected(self, rng):
        a = draw_system(rng, pool=[(2, 2)], max_port=1)
        with pytest.raises(mrsys.IncompatibleSystemsError):
            mrsys.difference(a, mrsys.random_system(2, 4, 1, 1, 1, rng=rng))
        with pytest.raises(mrsys.IncompatibleSystemsError):
            mrsys.difference(a, mrsys.random_system(2, 2, 1, 2, 1, rng=rng))


class TestCharacteristicCondition:
    def test_delayed_input_delays_output_exactly(self, rng):
        # pushing the input n slow samples later shifts the whole
        # central computation by one period, so outputs move by m slow
        # samples with no arithmetic difference at all
        for _ in range(10):
            s = draw_system(rng)
            m, n, T = s.m, s.n, s.period
            L = 2 * n
            u_vals = rng.standard_normal((L, s.input_dim)) + 1j * rng.standard_normal(
                (L, s.input_dim)
            )
            u = mrsys.VectorSequence(u_vals, 0)
            delayed = mrsys.VectorSequence(
                np.vstack([np.zeros((n, s.input_dim)), u_vals]), 0
            )
            steps = 3 * T
            y = mrsys.simulate(s, None, u, steps).outputs.values
            y_del = mrsys.simulate(s, None, delayed, steps).outputs.values
            assert np.all(y_del[:m] == 0.0)
            overlap = len(y_del) - m
            np.testing.assert_array_equal(y_del[m:], y[:overlap])


class TestRandomSystem:
    def test_radius_is_achieved(self, rng):
        for _ in range(5):
            s = draw_stable(rng, lo=0.4, hi=0.9)
            phi = np.eye(s.state_dim, dtype=complex)
            for t in range(s.period):
                phi = s.A[t] @ phi
            growth = np.max(np.abs(np.linalg.eigvals(phi))) ** (1.0 / s.period)
            # radius was drawn from [0.4, 0.9]
            assert 0.35 <= growth <= 0.95

    def test_deterministic_given_seed(self):
        a = mrsys.random_system(4, 6, 2, 1, 1, radius=0.5, rng=7)
        b = mrsys.random_system(4, 6, 2, 1, 1, radius=0.5, rng=7)
        for x, y in zip(a.A, b.A):
            np.testing.assert_array_equal(x, y)
