"""Command-line front end.

Subcommands: matrix, enumerate, entropy, omega, bound, ba, fractal,
sierpinski, verify.  Exit codes: 0 success, 1 verification failure, 2 usage
error.  Default initial state is 0 everywhere; the state-1 paths are
exercised by `verify` through the exchange symmetries.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, config, enumeration, fractal, optimize, serialization, verify
from .channel import build_channel_matrix, invert_channel_matrix, invert_two_step
from .matrices import DyadicMatrix

USAGE_ERROR = 2
CHECK_FAILED = 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trapdoor",
        description=(
            "Exact computations for the binary trapdoor channel: transition "
            "matrices and inverses, output enumeration, capacity upper bounds, "
            "simplex certification, and fractal rendering."
        ),
        epilog=(
            f"Resource caps honor the environment variables "
            f"{config.MATRIX_CAP_ENV}, {config.INPUT_CAP_ENV}, {config.BOUND_CAP_ENV}."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, n: bool = True, state: bool = True) -> None:
        if n:
            p.add_argument("-n", type=int, required=True, help="block length")
        if state:
            p.add_argument("-s", type=int, default=0, choices=(0, 1), help="initial state (default 0)")
        p.add_argument("-o", metavar="PATH", default=None, help="output file (default: stdout)")

    p = sub.add_parser("matrix", help="channel matrix or its exact inverse")
    add_common(p)
    p.add_argument("--inverse", action="store_true", help="emit the inverse matrix")
    p.add_argument("--two-step", action="store_true", help="use the four-block inverse recursion (even n)")
    p.add_argument("--format", choices=("csv", "text"), default="text")

    p = sub.add_parser("enumerate", help="feasible outputs and exact likelihoods")
    p.add_argument("-i", metavar="BITS", required=True, help="input bit string")
    p.add_argument("-s", type=int, default=0, choices=(0, 1), help="initial state (default 0)")
    p.add_argument("-o", metavar="PATH", default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("entropy", help="conditional entropy vector, direct vs recursive")
    add_common(p)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("omega", help="weight vector, direct vs recursive")
    add_common(p)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("bound", help="exact S and the capacity upper bound")
    add_common(p)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("ba", help="simplex capacity via Blahut-Arimoto")
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-10, help="per-letter bracket width (default 1e-10)")
    p.add_argument("--max-iter", type=int, default=200_000)
    p.add_argument("--format", choices=("json", "text"), default="text")

    p = sub.add_parser("fractal", help="render the channel attractor approximant")
    p.add_argument("--resolution", type=int, required=True, help="number of iterations")
    p.add_argument("-s", type=int, default=0, choices=(0, 1))
    p.add_argument("--mode", choices=("linear", "log", "binary"), default="log")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("-o", metavar="PATH", default=None, help="output image (default: fractal.pgm)")
    p.add_argument("--format", choices=("pgm", "png"), default=None, help="default: from file suffix")

    p = sub.add_parser("sierpinski", help="render the Sierpinski iterate")
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--mode", choices=("linear", "log", "binary"), default="binary")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("-o", metavar="PATH", default=None, help="output image (default: sierpinski.pgm)")
    p.add_argument("--format", choices=("pgm", "png"), default=None)

    p = sub.add_parser("verify", help="run the cross-module invariant suite")
    p.add_argument("--max-n", type=int, default=8, help="largest block length checked (default 8)")

    return parser


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _matrix_text(data: DyadicMatrix) -> str:
    return "\n".join(
        "  ".join(str(data.entry(i, j)) for j in range(data.dim)) for i in range(data.dim)
    )


def _cmd_matrix(args: argparse.Namespace) -> int:
    if args.inverse:
        if args.two_step:
            data = invert_two_step(args.n, args.s)
        else:
            data = invert_channel_matrix(build_channel_matrix(args.n, args.s))
        obj: object = data
    else:
        if args.two_step:
            raise ValueError("--two-step applies to the inverse only")
        obj = build_channel_matrix(args.n, args.s)
        data = obj.data
    if args.format == "csv":
        _emit(serialization.matrix_csv_text(obj), args.o)
    else:
        _emit(_matrix_text(data), args.o)
    return 0


def _cmd_enumerate(args: argparse.Namespace) -> int:
    dist = enumeration.generate_outputs(args.i, args.s)
    if args.format == "json":
        _emit(serialization.dumps_json(dist.to_json_dict()), args.o)
    else:
        lines = [f"input {args.i}, initial state {args.s}:"]
        for y in dist.support():
            lines.append(f"  {y}  p = {dist.outputs[y]}")
        _emit("\n".join(lines), args.o)
    return 0


def _cmd_entropy(args: argparse.Namespace) -> int:
    P = build_channel_matrix(args.n, args.s)
    direct = bounds.entropy_vector_direct(P)
    rec = bounds.entropy_vector_recursive_step(args.n)
    rec_entries = rec.entries if args.s == 0 else list(reversed(rec.entries))
    agree = direct.entries == rec_entries
    if args.format == "json":
        _emit(
            serialization.dumps_json(
                {
                    "n": args.n,
                    "s0": args.s,
                    "entries": [serialization.format_dyadic(d) for d in direct.entries],
                    "recursion_agrees": agree,
                }
            ),
            args.o,
        )
    else:
        vec = "  ".join(str(d) for d in direct.entries)
        _emit(f"h(n={args.n}, s0={args.s}) = [{vec}]\nrecursion agrees: {agree}", args.o)
    return 0 if agree else CHECK_FAILED


def _cmd_omega(args: argparse.Namespace) -> int:
    P = build_channel_matrix(args.n, args.s)
    direct = bounds.omega_direct(P, bounds.entropy_vector_direct(P))
    rec = bounds.omega_recursive(args.n) if args.s == 0 else bounds.omega_state1(args.n)
    agree = direct.entries == rec.entries
    if args.format == "json":
        _emit(
            serialization.dumps_json(
                {
                    "n": args.n,
                    "s0": args.s,
                    "entries": direct.entries,
                    "recursion_agrees": agree,
                }
            ),
            args.o,
        )
    else:
        vec = "  ".join(str(w) for w in direct.entries)
        _emit(f"omega(n={args.n}, s0={args.s}) = [{vec}]\nrecursion agrees: {agree}", args.o)
    return 0 if agree else CHECK_FAILED


def _cmd_bound(args: argparse.Namespace) -> int:
    result = bounds.upper_bound(args.n, args.s)
    if args.format == "json":
        _emit(serialization.dumps_json(serialization.bound_report(result)), args.o)
        return 0
    lines = [f"S = {result.S}, C_up = {result.c_up:.6f} b/u"]
    if result.d is not None:
        neg = result.negative_d_indices()
        if neg:
            lines.append(
                f"relaxed optimum leaves the simplex: d < 0 at 1-based indices {neg}"
            )
        else:
            lines.append("relaxed optimum lies on the simplex (all d >= 0)")
    lines.append(f"zero-error rate reference: {bounds.ZERO_ERROR_RATE:.6f} b/u")
    lines.append(f"feedback capacity reference: {bounds.golden_ratio_reference():.6f} b/u")
    _emit("\n".join(lines), args.o)
    return 0


def _cmd_ba(args: argparse.Namespace) -> int:
    P = build_channel_matrix(args.n, args.s)
    report = optimize.blahut_arimoto(P, tol=args.tol, max_iter=args.max_iter)
    bound = bounds.closed_form(args.n)
    if args.format == "json":
        _emit(serialization.dumps_json(serialization.ba_report(report, bound)), args.o)
    else:
        lines = [
            f"capacity (simplex) = {report.capacity_per_letter:.9f} b/u "
            f"after {report.iterations} iterations (bracket {report.final_gap:.2e})",
            f"upper bound        = {bound:.9f} b/u (gap {bound - report.capacity_per_letter:.9f})",
            "argmax p = [" + ", ".join(f"{x:.6g}" for x in report.distribution) + "]",
        ]
        _emit("\n".join(lines), args.o)
    return 0 if report.converged else CHECK_FAILED


def _check_resolution(k: int) -> None:
    limit = config.matrix_cap()
    if k < 0:
        raise ValueError("resolution must be non-negative")
    if k > limit:
        raise ValueError(
            f"resolution {k} exceeds the cap {limit} (the grid has 4**k cells; "
            f"override with {config.MATRIX_CAP_ENV})"
        )


def _render_to_file(grid, args: argparse.Namespace, default_name: str) -> None:
    pgm = fractal.render_pgm(grid, mode=args.mode, gamma=args.gamma)
    out = args.o
    fmt = args.format
    if out is None:
        out = f"{default_name}.{fmt or 'pgm'}"
    if fmt is None:
        fmt = "png" if str(out).lower().endswith(".png") else "pgm"
    if fmt == "png":
        serialization.write_png(pgm, out)
    else:
        serialization.write_pgm(pgm, out)
    sys.stdout.write(f"wrote {out} ({grid.side}x{grid.side}, {grid.nonzero_count()} occupied cells)\n")


def _cmd_fractal(args: argparse.Namespace) -> int:
    _check_resolution(args.resolution)
    grid = fractal.ifs_iterate(fractal.trapdoor_ifs(args.s), fractal.unit_grid(), args.resolution)
    _render_to_file(grid, args, f"trapdoor_s{args.s}_k{args.resolution}")
    return 0


def _cmd_sierpinski(args: argparse.Namespace) -> int:
    _check_resolution(args.resolution)
    grid = fractal.ifs_iterate(fractal.sierpinski_ifs(), fractal.unit_grid(), args.resolution)
    _render_to_file(grid, args, f"sierpinski_k{args.resolution}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = verify.run_checks(max_n=args.max_n)
    failed = 0
    for r in results:
        status = "ok  " if r.ok else "FAIL"
        sys.stdout.write(f"{status} {r.name} ({r.seconds:.2f}s): {r.detail}\n")
        failed += not r.ok
    sys.stdout.write(
        f"{len(results) - failed}/{len(results)} checks passed (max n = {args.max_n})\n"
    )
    return CHECK_FAILED if failed else 0


_COMMANDS = {
    "matrix": _cmd_matrix,
    "enumerate": _cmd_enumerate,
    "entropy": _cmd_entropy,
    "omega": _cmd_omega,
    "bound": _cmd_bound,
    "ba": _cmd_ba,
    "fractal": _cmd_fractal,
    "sierpinski": _cmd_sierpinski,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
