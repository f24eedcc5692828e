"""Command line front end.

Subcommands: eval, norm, approx, simulate, verify. Exit codes are part
of the interface:

    0  success
    1  verification failure (or an internal consistency error)
    2  unreadable/invalid system file or malformed argument
    3  evaluation point outside the harmonic resolvent set
    4  system too unstable for a finite norm
    5  requested reduction factor or target out of range
    6  mismatched dimensions between operands
"""

import argparse
import csv
import json
import os
import sys as _sys

import numpy as np

from .approx import hs_distance, hs_norm, optimal_approximant, reduce_target
from .exceptions import (
    BadTargetError,
    DimensionMismatchError,
    IncompatibleSystemsError,
    LyapunovConvergenceError,
    MisalignedSequenceError,
    MrsysError,
    NotDivisorError,
    NotInResolventError,
    SystemFileError,
    UnstableSystemError,
)
from .files import load_system, save_system
from .lifting import harmonic_transfer, transfer_at_period
from .signals import VectorSequence
from .system import simulate
from .verify import run_verification

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_RESOLVENT = 3
EXIT_UNSTABLE = 4
EXIT_TARGET = 5
EXIT_DIMENSION = 6


def _fmt_complex(value: complex, precision: int = 12) -> str:
    return f"{value.real:.{precision}g}{value.imag:+.{precision}g}j"


def _pair(value: complex) -> list:
    return [float(value.real), float(value.imag)]


def _matrix_payload(mat: np.ndarray) -> list:
    return [[_pair(cell) for cell in row] for row in mat]


def _print_matrix(mat: np.ndarray) -> None:
    for row in mat:
        print("  " + "  ".join(f"{_fmt_complex(cell):>28s}" for cell in row))


def _parse_z(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"--z expects RE,IM (got {text!r})")
    return complex(float(parts[0]), float(parts[1]))


def _parse_inline_vector(text: str) -> np.ndarray:
    try:
        return np.array([complex(part.strip()) for part in text.split(",")])
    except ValueError as exc:
        raise ValueError(f"cannot parse complex list {text!r}: {exc}") from exc


def _read_input_csv(path, dim: int) -> VectorSequence:
    rows = []
    try:
        with open(path, newline="") as fh:
            for index, raw in enumerate(csv.reader(fh)):
                cells = [cell.strip() for cell in raw if cell.strip() != ""]
                if not cells:
                    continue
                try:
                    rows.append([complex(cell) for cell in cells])
                except ValueError as exc:
                    if index == 0 and not rows:
                        continue  # tolerate a header line
                    raise SystemFileError(
                        f"{path} line {index + 1}: bad complex cell ({exc})"
                    ) from exc
    except OSError as exc:
        raise SystemFileError(f"cannot read {path}: {exc}") from exc
    for index, row in enumerate(rows):
        if len(row) != dim:
            raise SystemFileError(
                f"{path} row {index}: expected {dim} input components, got {len(row)}"
            )
    values = np.array(rows, dtype=complex) if rows else np.zeros((0, dim), dtype=complex)
    return VectorSequence(values.reshape(len(rows), dim), 0)


def cmd_eval(args) -> int:
    system = load_system(args.file)
    z = _parse_z(args.z)
    if args.period_factor < 1:
        raise BadTargetError(
            f"--period-factor must be a positive integer, got {args.period_factor}"
        )
    if args.period_factor > 1:
        tv = transfer_at_period(system, args.period_factor, z, args.tol)
    else:
        tv = harmonic_transfer(system, z, args.tol)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "z": _pair(tv.z),
                    "m": tv.m,
                    "n": tv.n,
                    "output_dim": system.output_dim,
                    "input_dim": system.input_dim,
                    "tol": args.tol,
                    "matrix": _matrix_payload(tv.matrix),
                },
                indent=2,
            )
        )
    else:
        print(
            f"harmonic transfer at z = {_fmt_complex(z)} "
            f"(rates {tv.m}:{tv.n}, {tv.matrix.shape[0]}x{tv.matrix.shape[1]}, "
            f"resolvent margin {args.tol:g})"
        )
        _print_matrix(tv.matrix)
    return EXIT_OK


def cmd_norm(args) -> int:
    system = load_system(args.file)
    if args.other is not None:
        label = "distance"
        report = hs_distance(
            system, load_system(args.other), method=args.method, tol=args.tol
        )
    else:
        label = "norm"
        report = hs_norm(system, method=args.method, tol=args.tol)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "kind": label,
                    "value": report.value,
                    "method": report.method,
                    "terms_used": report.terms_used,
                    "spectral_radius_bound": report.spectral_radius_bound,
                    "converged": report.converged,
                    "tol": args.tol,
                }
            )
        )
    else:
        print(f"{label}: {report.value:.6f}")
        print(
            f"  method {report.method}, spectral radius bound "
            f"{report.spectral_radius_bound:.6g}, series terms {report.terms_used}, "
            f"tol {args.tol:g}"
        )
    return EXIT_OK


def cmd_approx(args) -> int:
    system = load_system(args.file)
    if args.q is not None:
        q = args.q
    else:
        target = reduce_target(system.rate_gcd, args.target_c)
        q = target.q
        print(
            f"target common factor {target.c_hat} realized at "
            f"{target.c_tilde} (decimation {target.q})"
        )
    approx = optimal_approximant(system, q, variant=args.variant)
    save_system(approx, args.output)
    print(
        f"wrote {args.output}: rates {approx.m}:{approx.n}, "
        f"state dimension {approx.state_dim}, central period {approx.period}"
    )
    if not args.no_distance:
        try:
            report = hs_distance(system, approx, method="lyapunov")
            print(f"approximation distance: {report.value:.6f}")
        except (UnstableSystemError, LyapunovConvergenceError) as exc:
            print(f"approximation distance: not finite ({exc})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    system = load_system(args.file)
    if args.input is not None:
        u = _read_input_csv(args.input, system.input_dim)
    else:
        u = VectorSequence(np.zeros((0, system.input_dim)), 0)
    x0 = _parse_inline_vector(args.x0) if args.x0 is not None else None
    trace = simulate(system, x0, u, args.steps)
    p, q = system.up_factor, system.down_factor
    if args.format == "json":
        payload = {
            "steps": args.steps,
            "rates": [system.m, system.n],
            "inputs": _matrix_payload(trace.inputs.values),
            "central_inputs": _matrix_payload(trace.central_inputs.values),
            "states": _matrix_payload(trace.states.values),
            "central_outputs": _matrix_payload(trace.central_outputs.values),
            "outputs": _matrix_payload(trace.outputs.values),
        }
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    writer = csv.writer(_sys.stdout, lineterminator="\n")
    header = (
        ["t"]
        + [f"u_{i}" for i in range(system.input_dim)]
        + [f"x_{i}" for i in range(system.state_dim)]
        + [f"y_{i}" for i in range(system.output_dim)]
    )
    writer.writerow(header)
    for t in range(args.steps):
        row = [str(t)]
        if t % p == 0:
            row += [_fmt_complex(c, 17) for c in trace.inputs.at(t // p)]
        else:
            row += [""] * system.input_dim
        row += [_fmt_complex(c, 17) for c in trace.states.values[t]]
        if t % q == 0:
            row += [_fmt_complex(c, 17) for c in trace.outputs.at(t // q)]
        else:
            row += [""] * system.output_dim
        writer.writerow(row)
    return EXIT_OK


def cmd_verify(args) -> int:
    system = load_system(args.file)
    env_seed = os.environ.get("MRSYS_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError as exc:
            raise ValueError(f"MRSYS_SEED must be an integer, got {env_seed!r}") from exc
    else:
        seed = args.seed
    results = run_verification(system, trials=args.trials, seed=seed)
    for result in results:
        line = f"{result.status.upper():<4s} {result.name}"
        if result.detail:
            line += f" ({result.detail})"
        print(line)
    failed = sum(1 for r in results if r.status == "fail")
    passed = sum(1 for r in results if r.status == "pass")
    skipped = sum(1 for r in results if r.status == "skip")
    print(f"{passed} passed, {failed} failed, {skipped} skipped (seed {seed})")
    return EXIT_FAILED if failed else EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrsys",
        description="Multirate state-space systems: transfer evaluation, "
        "norms, optimal period reduction, simulation, self checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the harmonic transfer matrix")
    p_eval.add_argument("file", help="system JSON file")
    p_eval.add_argument("--z", required=True, metavar="RE,IM", help="evaluation point")
    p_eval.add_argument(
        "--period-factor",
        type=int,
        default=1,
        metavar="K",
        help="evaluate the (Km, Kn) presentation instead",
    )
    p_eval.add_argument("--tol", type=float, default=1e-9, help="resolvent margin")
    p_eval.add_argument("--format", choices=("text", "json"), default="text")
    p_eval.set_defaults(func=cmd_eval)

    p_norm = sub.add_parser(
        "norm", help="Hilbert-Schmidt norm of a system (or distance of two)"
    )
    p_norm.add_argument("file")
    p_norm.add_argument("other", nargs="?", default=None)
    p_norm.add_argument(
        "--method", choices=("both", "series", "lyapunov"), default="both"
    )
    p_norm.add_argument("--hs-tol", dest="tol", type=float, default=1e-10)
    p_norm.add_argument("--format", choices=("text", "json"), default="text")
    p_norm.set_defaults(func=cmd_norm)

    p_approx = sub.add_parser(
        "approx", help="optimal shorter-period approximant to a new file"
    )
    p_approx.add_argument("file")
    group = p_approx.add_mutually_exclusive_group(required=True)
    group.add_argument("--q", type=int, help="decimation factor (divides gcd(m, n))")
    group.add_argument(
        "--target-c", type=int, metavar="CHAT", help="requested common rate factor"
    )
    p_approx.add_argument("--variant", type=int, choices=(1, 2), default=1)
    p_approx.add_argument("-o", "--output", required=True, help="output system file")
    p_approx.add_argument(
        "--no-distance", action="store_true", help="skip the distance report"
    )
    p_approx.set_defaults(func=cmd_approx)

    p_sim = sub.add_parser("simulate", help="run the central recursion")
    p_sim.add_argument("file")
    p_sim.add_argument(
        "--input",
        metavar="CSV",
        help="CSV of slow input samples, one row per sample, complex cells re+imj",
    )
    p_sim.add_argument(
        "--x0", metavar="LIST", help="initial state as an inline complex list"
    )
    p_sim.add_argument("--steps", type=int, required=True, metavar="N")
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_verify = sub.add_parser("verify", help="run the invariant batteries")
    p_verify.add_argument("file")
    p_verify.add_argument("--trials", type=int, default=50)
    p_verify.add_argument(
        "--seed", type=int, default=0, help="overridden by MRSYS_SEED if set"
    )
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemFileError as exc:
        return _fail(exc, EXIT_PARSE)
    except NotInResolventError as exc:
        return _fail(exc, EXIT_RESOLVENT)
    except (UnstableSystemError, LyapunovConvergenceError) as exc:
        return _fail(exc, EXIT_UNSTABLE)
    except (NotDivisorError, BadTargetError) as exc:
        return _fail(exc, EXIT_TARGET)
    except (
        DimensionMismatchError,
        IncompatibleSystemsError,
        MisalignedSequenceError,
    ) as exc:
        return _fail(exc, EXIT_DIMENSION)
    except MrsysError as exc:
        return _fail(exc, EXIT_FAILED)
    except ValueError as exc:
        return _fail(exc, EXIT_PARSE)


def _fail(exc: Exception, code: int) -> int:
    print(f"error: {exc}", file=_sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
