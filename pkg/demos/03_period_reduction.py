"""Optimal shorter-period approximation and the norm split.

Reduces both bundled fixtures by the factor 2: the two-rate fixture
collapses to a time-invariant system (with a doubled state), the
modulated four-rate fixture to a 1:2 system with rational entries. The
approximation error and the approximant norm split the source norm
exactly, and perturbing the approximant only makes the distance worse.
"""

from pathlib import Path

import numpy as np

import mrsys

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def tidy(mat, tol=1e-12):
    # displayed copy only: snap rounding dust to zero
    out = mat.copy()
    out.real[np.abs(out.real) < tol] = 0.0
    out.imag[np.abs(out.imag) < tol] = 0.0
    return out


def show(system, title):
    print(title)
    for name in "ABCD":
        mats = getattr(system, name)
        rows = " | ".join(
            np.array_str(tidy(m), precision=3, suppress_small=True).replace("\n", " ")
            for m in mats
        )
        print(f"  {name}: {rows}")


def main():
    s = mrsys.load_system(FIXTURES / "ex41.json")
    red = mrsys.optimal_approximant(s, 2)
    print(f"source rates {s.m}:{s.n} -> reduced rates {red.m}:{red.n}, "
          f"state dimension {s.state_dim} -> {red.state_dim}")
    show(red, "reduced operators (variant 1):")

    whole = mrsys.hs_norm(s)
    part = mrsys.hs_norm(red)
    gap = mrsys.hs_distance(s, red)
    print(f"\nsource norm      {whole.value:.6f}  (method {whole.method}, "
          f"{whole.terms_used} series terms)")
    print(f"approximant norm {part.value:.6f}")
    print(f"distance         {gap.value:.6f}")
    split = gap.value**2 + part.value**2
    print(f"norm split: {gap.value:.4f}^2 + {part.value:.4f}^2 "
          f"= {split:.6f} vs {whole.value**2:.6f}")

    rng = np.random.default_rng(11)
    print("\nrandom unit-scaled nudges of the approximant, distance change:")
    for scale in (1e-1, 1e-2, 1e-3):
        delta = rng.standard_normal((red.state_dim, red.input_dim))
        delta *= scale / np.linalg.norm(delta)
        bumped = mrsys.MultirateSystem(
            red.m, red.n, red.state_dim, red.input_dim, red.output_dim,
            red.A, (red.B[0] + delta,), red.C, red.D,
        )
        worse = mrsys.hs_distance(s, bumped).value
        print(f"  nudge {scale:g}: distance {worse:.9f} "
              f"(+{worse - gap.value:.2e})")

    s4 = mrsys.load_system(FIXTURES / "ex42.json")
    red4 = mrsys.optimal_approximant(s4, 2)
    print(f"\nmodulated fixture: rates {s4.m}:{s4.n} -> {red4.m}:{red4.n}")
    show(red4, "reduced operators:")
    target = mrsys.reduce_target(6, 4)
    print(f"\nrate planning: asking a period-6 common factor for 4 gives "
          f"gcd {target.c_tilde}, so decimation q = {target.q}")


if __name__ == "__main__":
    main()
