"""Reference values the tests compare against.

The closed forms below are written straight from the worked fixtures
(pencil-and-paper formulas), so they never call back into the package.
The quadrature and truncated-series helpers turn those formulas into
norm oracles. Only the random-system drawers at the bottom use mrsys,
and only as a generator, never as an oracle.
"""

from math import gcd

import numpy as np

import mrsys


def g41(z):
    """2x2 transfer of the slow-fixture system (fixtures/ex41.json)."""
    z = complex(z)
    s = 4.0 * z / ((2.0 - z) * (2.0 + z))
    return s * np.array(
        [[4.0 * z, 6.0 - 5.0 * z], [-6.0 - 5.0 * z, 4.0 * z]], dtype=complex
    )


def g41_lti(z):
    """Scalar transfer of its optimal rate-(1,1) reduction."""
    z = complex(z)
    return 16.0 * z * z / (4.0 - z * z)


def ex42_down(z):
    """1x2 decimated transfer of the modulated fixture (ex42.json)."""
    z = complex(z)
    den = 2.0 * (z**4 + 1.0)
    return np.array(
        [
            [
                z**4 + 2j * z**3 + 2.0 * z + 1.0,
                z**4 - 2j * z**3 - 2.0 * z + 1.0,
            ]
        ],
        dtype=complex,
    ) / den


def hs_sq_taylor_g41(k_max: int = 200) -> float:
    """Squared norm of the slow fixture from its closed form.

    First transfer column is [16 z^2, -24 z - 20 z^2] / (4 - z^2);
    expand 1/(4 - z^2) = sum_k z^(2k) / 4^(k+1) and sum squared series
    coefficients. Pure float arithmetic, independent of the package.
    """
    inv = np.zeros(k_max + 1)
    inv[0::2] = [4.0 ** (-(k // 2) - 1) for k in range(0, k_max + 1, 2)]

    def scaled_shift(scale, amount):
        out = np.zeros(k_max + 1)
        out[amount:] = scale * inv[: k_max + 1 - amount]
        return out

    top = scaled_shift(16.0, 2)
    bot = scaled_shift(-24.0, 1) + scaled_shift(-20.0, 2)
    return float(np.sum(top * top) + np.sum(bot * bot))


def hs_sq_quadrature(first_col, points: int = 4096) -> float:
    """Mean of ||first column||^2 over the unit circle.

    Equals the sum of squared series coefficients whenever the column
    is analytic past the closed unit disc (trapezoid rule on a smooth
    periodic integrand converges spectrally).
    """
    total = 0.0
    for theta in np.linspace(0.0, 2.0 * np.pi, points, endpoint=False):
        col = np.asarray(first_col(np.exp(1j * theta)))
        total += float(np.vdot(col, col).real)
    return total / points


# rate pairs at desk scale: lcm <= 12, mix of gcd 1, 2, 3, 4, 6
RATE_POOL = [
    (2, 2), (4, 2), (2, 4), (2, 6), (6, 2), (4, 4), (3, 3), (3, 6),
    (6, 3), (4, 6), (6, 4), (4, 8), (8, 4), (6, 6), (6, 12), (12, 6),
    (3, 4), (2, 3), (1, 4), (5, 1),
]

# subset with a nontrivial common rate factor, for reduction tests
REDUCIBLE_POOL = [p for p in RATE_POOL if gcd(*p) > 1]


def draw_system(rng, pool=RATE_POOL, radius=None, max_state=3, max_port=2):
    m, n = pool[int(rng.integers(len(pool)))]
    dx = int(rng.integers(1, max_state + 1))
    du = int(rng.integers(1, max_port + 1))
    dy = int(rng.integers(1, max_port + 1))
    return mrsys.random_system(m, n, dx, du, dy, radius=radius, rng=rng)


def draw_stable(rng, pool=RATE_POOL, lo=0.3, hi=0.8, **kw):
    return draw_system(rng, pool=pool, radius=float(rng.uniform(lo, hi)), **kw)


def resolvent_point(lifted, rng, lo=0.4, hi=1.2, tries=64):
    """A z with lo <= |z| <= hi inside the harmonic resolvent set."""
    for _ in range(tries):
        r = float(rng.uniform(lo, hi))
        phi = float(rng.uniform(0.0, 2.0 * np.pi))
        z = complex(r * np.cos(phi), r * np.sin(phi))
        if mrsys.in_harmonic_resolvent(lifted, z):
            return z
    raise RuntimeError("no resolvent point found in the annulus")
