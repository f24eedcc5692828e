"""The sampling plumbing underneath the block transfer calculus.

Shows the rate changers on explicit sequences, the coefficient
analysis of a modulated signal, and the four identities coupling the
two. These identities are what lets a slow-rate map be read off
selected rows and columns of the fast-rate block matrix.
"""

import numpy as np

import mrsys
from mrsys.verify import sampler_identity_residual


def main():
    v = mrsys.VectorSequence([1.0, 2.0, 3.0], 0)
    up = mrsys.upsample(v, 3)
    print(f"upsample by 3:   {v.values.ravel().real} -> {up.values.ravel().real}")
    down = mrsys.downsample(up, 3)
    print(f"downsample back: {down.values.ravel().real}")

    # a modulated signal is its coefficient stack and back
    T, z = 4, 0.8 * np.exp(0.3j)
    rng = np.random.default_rng(5)
    coeffs = mrsys.EmpCoefficients(
        T, z, rng.standard_normal((T, 2)) + 1j * rng.standard_normal((T, 2))
    )
    window = mrsys.emp_synthesize(coeffs, range(T))
    back = mrsys.emp_analyze(window, z, T)
    print(f"\nanalysis/synthesis round trip over one window of {T}: "
          f"{np.max(np.abs(back.coefficients - coeffs.coefficients)):.2e}")
    long_window = mrsys.emp_synthesize(coeffs, range(3 * T))
    print(f"synthesized signal is modulated-periodic: "
          f"{mrsys.is_emp(long_window, z, T)}")

    # matrix forms agree with the operators sample for sample
    q, count, dim = 3, 4, 2
    flat = rng.standard_normal(count * dim)
    seq = mrsys.VectorSequence(flat.reshape(count, dim), 0)
    by_matrix = mrsys.upsample_matrix(q, count, dim) @ flat
    by_operator = mrsys.upsample(seq, q)
    padded = np.zeros(q * count * dim)
    padded[: by_operator.values.size] = by_operator.values.ravel().real
    print(f"\nupsample operator vs matrix: "
          f"{np.max(np.abs(by_matrix - padded)):.2e}")

    print("\nresidual of the four sampler/analysis identities, 8 draws:")
    for k in range(8):
        period = int(rng.integers(1, 7))
        factor = int(rng.integers(1, 5))
        r = sampler_identity_residual(rng, period, factor, 2, z)
        print(f"  T={period} q={factor}: {r:.2e}")


if __name__ == "__main__":
    main()
