"""Command-line front end.

Subcommands: eval (pointwise values), table (CSV tabulation), verify (the
identity suites as a JSON report), gram (orthonormality matrix dump),
decompose (sampled field to mode amplitudes) and modes (operate on a mode
file, optionally sampling it back to a field).

Exit codes: 0 success / all identities pass, 1 verification failure,
2 usage or input error.  Output is deterministic: identical invocations
produce byte-identical streams.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__, opalgebra, plane, quadrature, verify
from .basis import carrier_L, carrier_M, evaluate
from .opalgebra import OperatorName
from .plane import Field2D, ModeCoefficients, ModeIndex, PolarGrid


def _fmt(value: float) -> str:
    return f"{value + 0.0:.17g}"  # +0.0 folds negative zero


def _carrier_for_alpha(n: int, alpha: int):
    if n < 0:
        raise ValueError(f"n must be non-negative (got n={n})")
    if n + alpha < 0:
        raise ValueError(f"n + alpha must be non-negative (got n={n}, alpha={alpha})")
    return carrier_M(n, n + alpha)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laguerre-ladder",
        description="Evaluate, tabulate and machine-verify the half-line "
        "ladder-operator basis and its plane modes.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one basis function at given points")
    p_eval.add_argument("--family", required=True, choices=("M", "scriptM", "L", "Z"))
    p_eval.add_argument("--n", type=int)
    p_eval.add_argument("--alpha", type=int)
    p_eval.add_argument("--p", type=int)
    p_eval.add_argument("--j", type=Fraction)
    p_eval.add_argument("--m", type=Fraction)
    p_eval.add_argument("--x", type=float, action="append")
    p_eval.add_argument("--r", type=float)
    p_eval.add_argument("--phi", type=float)

    p_table = sub.add_parser("table", help="tabulate one basis function as CSV")
    p_table.add_argument("--family", required=True, choices=("M", "scriptM", "L"))
    p_table.add_argument("--n", type=int)
    p_table.add_argument("--alpha", type=int)
    p_table.add_argument("--p", type=int)
    p_table.add_argument("--j", type=Fraction)
    p_table.add_argument("--m", type=Fraction)
    p_table.add_argument("--xmin", type=float, default=0.0)
    p_table.add_argument("--xmax", type=float, required=True)
    p_table.add_argument("--points", type=int, default=101)

    p_verify = sub.add_parser("verify", help="run identity suites, print JSON report")
    p_verify.add_argument(
        "--suite",
        default="all",
        choices=verify.SUITE_NAMES + ("all",),
    )
    p_verify.add_argument("--nmax", type=int, default=12)
    p_verify.add_argument("--alpha-max", type=int, default=10)
    p_verify.add_argument("--order", type=int, default=64)
    p_verify.add_argument("--jmax", type=int, default=6)
    p_verify.add_argument("--angular", type=int, default=64)
    p_verify.add_argument(
        "--defect",
        choices=("jplus-sign",),
        help="inject a known-bad matrix element (self-test of the suites)",
    )

    p_gram = sub.add_parser("gram", help="dump the orthonormality Gram matrix as CSV")
    p_gram.add_argument("--alpha", type=int, required=True)
    p_gram.add_argument("--nmax", type=int, default=12)
    p_gram.add_argument("--order", type=int, default=64)

    p_dec = sub.add_parser("decompose", help="mode amplitudes of a sampled field")
    p_dec.add_argument("--input", required=True, help="field CSV (r,phi,re,im); - for stdin")
    p_dec.add_argument("--jmax", type=int, required=True)
    p_dec.add_argument("--min-power", type=float, default=1e-12)

    p_modes = sub.add_parser("modes", help="transform a mode file or sample it to a field")
    p_modes.add_argument("--input", required=True, help="mode CSV (j,m,re,im[,power]); - for stdin")
    p_modes.add_argument("--apply", choices=("Jplus", "Jminus", "J3"))
    p_modes.add_argument("--to-field", action="store_true")
    p_modes.add_argument("--radial-order", type=int, default=64)
    p_modes.add_argument("--angular", type=int, default=64)
    return parser


# ---------------------------------------------------------------------------
# leaf commands
# ---------------------------------------------------------------------------


def _require(args, names: list[str]) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise ValueError(f"missing required option(s): {', '.join(missing)}")


def _eval_carrier_from_args(args):
    if args.family == "M":
        _require(args, ["n", "alpha"])
        return _carrier_for_alpha(args.n, args.alpha)
    if args.family == "scriptM":
        _require(args, ["n", "p"])
        return carrier_M(args.n, args.p)
    _require(args, ["j", "m"])
    return carrier_L(args.j, args.m)


def cmd_eval(args) -> int:
    if args.family == "Z":
        _require(args, ["j", "m", "r", "phi"])
        if args.j.denominator != 1 or args.m.denominator != 1:
            raise ValueError("plane modes need integer j and m")
        value = plane.eval_Z(ModeIndex(int(args.j), int(args.m)), args.r, args.phi)
        print(f"{_fmt(value.real)},{_fmt(value.imag)}")
        return 0
    carrier = _eval_carrier_from_args(args)
    _require(args, ["x"])
    for x in args.x:
        print(_fmt(evaluate(carrier, x)))
    return 0


def cmd_table(args) -> int:
    carrier = _eval_carrier_from_args(args)
    if args.points < 2 or args.xmax <= args.xmin or args.xmin < 0:
        raise ValueError("table needs xmin >= 0 < xmax and at least two points")
    print("x,value")
    for x in np.linspace(args.xmin, args.xmax, args.points):
        print(f"{_fmt(float(x))},{_fmt(evaluate(carrier, float(x)))}")
    return 0


def cmd_verify(args) -> int:
    names = list(verify.SUITE_NAMES) if args.suite == "all" else [args.suite]
    opalgebra.set_injected_defect(args.defect)
    try:
        report = verify.run_suites(
            names,
            nmax=args.nmax,
            alpha_max=args.alpha_max,
            order=args.order,
            jmax=args.jmax,
            angular=args.angular,
        )
    finally:
        opalgebra.set_injected_defect(None)
    out = {"version": __version__, **report}
    print(json.dumps(out, indent=2))
    if not report["all_pass"]:
        for suite, checks in report["suites"].items():
            for name, check in checks.items():
                if not check["pass"]:
                    print(f"FAILED {suite}/{name}", file=sys.stderr)
        return 1
    return 0


def cmd_gram(args) -> int:
    rule = quadrature.gauss_laguerre(args.order)
    gram = quadrature.gram_matrix(args.alpha, args.nmax, rule)
    for row in gram:
        print(",".join(_fmt(float(v)) for v in row))
    return 0


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read().splitlines()


def _parse_csv(lines: list[str], header: list[str], min_fields: int) -> list[list[float]]:
    if not lines:
        raise ValueError("line 1: empty input, expected a header row")
    got = [c.strip() for c in lines[0].split(",")]
    if got[: len(header)] != header:
        raise ValueError(f"line 1: expected header {','.join(header)!r}, got {lines[0]!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) < min_fields:
            raise ValueError(f"line {lineno}: expected at least {min_fields} fields")
        try:
            rows.append([float(c) for c in cells[:min_fields]])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return rows


def _field_from_rows(rows: list[list[float]]) -> Field2D:
    if not rows:
        raise ValueError("field file has no sample rows")
    first_r = rows[0][0]
    q = 0
    for row in rows:
        if row[0] != first_r:
            break
        q += 1
    if q == 0 or len(rows) % q:
        raise ValueError("rows do not form a radial-major grid")
    r_count = len(rows) // q
    grid = PolarGrid.build(r_count, q)
    values = np.empty((r_count, q), dtype=complex)
    radial = grid.radial_nodes
    angular = grid.angular_nodes
    for k in range(r_count):
        for i in range(q):
            r, phi, re, im = rows[k * q + i]
            if abs(r - radial[k]) > 1e-8 * (1.0 + radial[k]):
                raise ValueError(
                    f"radial sample {r!r} does not sit on the order-{r_count} grid"
                )
            if abs(phi - angular[i]) > 1e-8:
                raise ValueError(f"angular sample {phi!r} does not sit on the grid")
            values[k, i] = complex(re, im)
    return Field2D(grid=grid, values=values)


def cmd_decompose(args) -> int:
    rows = _parse_csv(_read_lines(args.input), ["r", "phi", "re", "im"], 4)
    field = _field_from_rows(rows)
    coeffs = plane.decompose(field, args.jmax)
    print("j,m,re,im,power")
    for idx, amp in coeffs.sorted_items():
        power = abs(amp) ** 2
        if power > args.min_power:
            print(f"{idx.j},{idx.m},{_fmt(amp.real)},{_fmt(amp.imag)},{_fmt(power)}")
    print(f"captured power: {_fmt(coeffs.power())}", file=sys.stderr)
    return 0


def _modes_from_rows(rows: list[list[float]]) -> ModeCoefficients:
    coeffs: dict[ModeIndex, complex] = {}
    for j, m, re, im in rows:
        if j != int(j) or m != int(m):
            raise ValueError(f"mode labels must be integers (got j={j}, m={m})")
        coeffs[ModeIndex(int(j), int(m))] = complex(re, im)
    jmax = max((idx.j for idx in coeffs), default=0)
    return ModeCoefficients(coeffs=coeffs, jmax=jmax)


def cmd_modes(args) -> int:
    rows = _parse_csv(_read_lines(args.input), ["j", "m", "re", "im"], 4)
    coeffs = _modes_from_rows(rows)
    if args.apply:
        coeffs = plane.apply_mode_operator(OperatorName[args.apply], coeffs)
    if args.to_field:
        grid = PolarGrid.build(args.radial_order, args.angular)
        grid.require_support(coeffs.jmax)
        field = plane.reconstruct(coeffs, grid)
        print("r,phi,re,im")
        for k, r in enumerate(grid.radial_nodes):
            for i, phi in enumerate(grid.angular_nodes):
                v = field.values[k, i]
                print(f"{_fmt(r)},{_fmt(phi)},{_fmt(v.real)},{_fmt(v.imag)}")
        return 0
    print("j,m,re,im,power")
    for idx, amp in coeffs.sorted_items():
        print(
            f"{idx.j},{idx.m},{_fmt(amp.real)},{_fmt(amp.imag)},{_fmt(abs(amp) ** 2)}"
        )
    return 0


_COMMANDS = {
    "eval": cmd_eval,
    "table": cmd_table,
    "verify": cmd_verify,
    "gram": cmd_gram,
    "decompose": cmd_decompose,
    "modes": cmd_modes,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
