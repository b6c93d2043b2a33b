"""Command-line front end: identity suites, eigenvectors, spectra, scans.

Exit codes: 0 on success, 1 when a verification fails its tolerance, 2 for
usage or validation errors.  All data output is byte-deterministic (fixed
15-significant-digit decimal formatting, no timestamps).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import algebra, eigen, operators
from .formatting import dumps, fmt_real
from .lattice import MomentumLattice, grid_to_csv, square_well_lattice

SYMBOLIC_CSV_HEADER = "identity,zero,term_count"


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _lattice_args(sub, n_default=64):
    sub.add_argument("--p0", type=float, default=0.0, help="base momentum (default 0)")
    sub.add_argument("--a", type=float, default=0.1, help="lattice spacing (default 0.1)")
    sub.add_argument("--n", type=int, default=n_default,
                     help=f"number of lattice points (default {n_default})")


def _output_args(sub):
    sub.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="output format (default csv)")
    sub.add_argument("--out", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momlat",
        description="Operator calculus on a discrete momentum lattice: "
                    "identity verification, position eigenvectors, spectra, "
                    "and continuum-limit scans.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("verify", help="run the symbolic and numeric identity suites")
    _lattice_args(p)
    _output_args(p)
    p.add_argument("--tol", type=float, default=1e-10,
                   help="numeric residual tolerance (default 1e-10)")
    p.set_defaults(handler=run_verify)

    p = subs.add_parser("check", help="normal-order an expression and test for zero")
    p.add_argument("expression", help="expression over A, Abar, P, X, Q, H, D, Dbar, I, i, a")
    p.set_defaults(handler=run_check)

    p = subs.add_parser("eigvec", help="position eigenvector on a finite lattice")
    p.add_argument("--x", type=float, required=True, help="position eigenvalue")
    p.add_argument("--phi0-phase", type=float, default=0.0,
                   help="phase of the seed value (default 0)")
    _lattice_args(p, n_default=8)
    _output_args(p)
    p.set_defaults(handler=run_eigvec)

    p = subs.add_parser("spectrum", help="eigenvalues of the truncated position operator")
    _lattice_args(p, n_default=16)
    _output_args(p)
    p.set_defaults(handler=run_spectrum)

    p = subs.add_parser("continuum", help="convergence of [X,P] -> -i as the spacing shrinks")
    p.add_argument("--spacings", default="0.1,0.05,0.025,0.0125",
                   help="comma-separated decreasing spacings")
    p.add_argument("--window", default="-8:8", help="momentum window lo:hi "
                   "(use --window=-8:8 for negative bounds)")
    _output_args(p)
    p.set_defaults(handler=run_continuum)

    p = subs.add_parser("well", help="square-well lattice report plus the identity suites")
    p.add_argument("--L", type=float, required=True, help="well width")
    p.add_argument("--levels", type=int, default=16, help="number of levels (default 16)")
    p.add_argument("--hbar", type=float, default=1.0, help="hbar (default 1)")
    p.add_argument("--tol", type=float, default=1e-10,
                   help="numeric residual tolerance (default 1e-10)")
    _output_args(p)
    p.set_defaults(handler=run_well)

    return parser


def _suite_sections(lattice: MomentumLattice, tol: float):
    symbolic = algebra.verify_symbolic_suite()
    numeric = operators.verify_identity_suite(lattice)
    passed = all(c.zero for c in symbolic) and \
        all(r.max_interior_residual < tol for r in numeric)
    return symbolic, numeric, passed


def _suite_csv(symbolic, numeric) -> str:
    lines = [SYMBOLIC_CSV_HEADER]
    for c in symbolic:
        lines.append(f"{c.identity},{'true' if c.zero else 'false'},"
                     f"{c.normal_form_term_count}")
    return "\n".join(lines) + "\n\n" + operators.reports_to_csv(numeric)


def run_verify(args) -> int:
    if args.n < 8:
        raise ValueError("n must be >= 8")
    lattice = MomentumLattice(args.p0, args.a, args.n)
    symbolic, numeric, passed = _suite_sections(lattice, args.tol)
    if args.format == "json":
        doc = {
            "lattice": {"p0": lattice.p0, "a": lattice.a, "n": lattice.n_points},
            "tolerance": args.tol,
            "symbolic": [algebra.check_to_dict(c) for c in symbolic],
            "numeric": [operators.report_to_dict(r) for r in numeric],
            "passed": passed,
        }
        _emit(dumps(doc) + "\n", args.out)
    else:
        _emit(_suite_csv(symbolic, numeric), args.out)
    return 0 if passed else 1


def run_check(args) -> int:
    nf = algebra.normal_form(algebra.parse(args.expression))
    print(algebra.format_normal_form(nf))
    print("ZERO" if nf.is_zero else "NONZERO")
    return 0 if nf.is_zero else 1


def run_eigvec(args) -> int:
    if args.n < 1:
        raise ValueError("n must be >= 1")
    if abs(args.a * args.x) > 1:
        raise ValueError("eigenvalue outside lattice band")
    lattice = MomentumLattice(args.p0, args.a, args.n)
    phi0 = eigen.phase_seed(args.phi0_phase)
    closed = eigen.eigenvector_closed_form(lattice, args.x, phi0)
    rec = eigen.eigenvector_recurrence(lattice, args.x, phi0)
    scale = np.max(np.abs(closed.phi.values))
    max_dev = float(np.max(np.abs(closed.phi.values - rec.phi.values)) / scale)
    unit = eigen.normalized(closed)

    summary = eigen.result_envelope(unit, is_normalized=True)
    summary["max_dev_recurrence_vs_closed"] = max_dev
    summary["phi0_magnitude_direct"] = abs(unit.phi0)
    formula_n = args.n - 1
    summary["formula_N"] = formula_n
    try:
        summary["phi0_magnitude_formula"] = eigen.normalization_formula(
            args.x, args.a, formula_n)
    except ValueError:
        summary["phi0_magnitude_formula"] = None
    if formula_n >= 1:
        head = MomentumLattice(args.p0, args.a, formula_n)
        head_vec = eigen.eigenvector_recurrence(head, args.x, phi0)
        summary["phi0_magnitude_direct_first_N"] = \
            eigen.normalization_direct(head_vec) * abs(phi0)
    else:
        summary["phi0_magnitude_direct_first_N"] = None

    if args.format == "json":
        summary["values"] = [[v.real, v.imag] for v in unit.phi.values]
        _emit(dumps(summary) + "\n", args.out)
    else:
        _emit(grid_to_csv(unit.phi), args.out)
        stream = sys.stdout if args.out else sys.stderr
        stream.write(dumps(summary) + "\n")
    return 0


def run_spectrum(args) -> int:
    if args.n < 1:
        raise ValueError("n must be >= 1")
    lattice = MomentumLattice(args.p0, args.a, args.n)
    values = eigen.truncated_spectrum(lattice)
    if args.format == "json":
        doc = {"p0": lattice.p0, "a": lattice.a, "n": lattice.n_points,
               "eigenvalues": [float(v) for v in values]}
        _emit(dumps(doc) + "\n", args.out)
    else:
        lines = ["k,x"]
        for k, v in enumerate(values, start=1):
            lines.append(f"{k},{fmt_real(v)}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _parse_spacings(text: str):
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise ValueError(f"bad spacing list {text!r}")


def _parse_window(text: str):
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"bad window {text!r}, expected lo:hi")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"bad window {text!r}, expected lo:hi")


def run_continuum(args) -> int:
    table = operators.continuum_scan(_parse_spacings(args.spacings),
                                     window=_parse_window(args.window))
    if args.format == "json":
        _emit(dumps(operators.convergence_to_dict(table)) + "\n", args.out)
    else:
        _emit(operators.convergence_to_csv(table), args.out)
    return 0


def run_well(args) -> int:
    if args.levels < 8:
        raise ValueError("levels must be >= 8 to run the identity suite")
    lattice = square_well_lattice(args.L, args.levels, args.hbar)
    symbolic, numeric, passed = _suite_sections(lattice, args.tol)
    if args.format == "json":
        doc = {
            "lattice": {"p0": lattice.p0, "a": lattice.a, "levels": lattice.n_points},
            "tolerance": args.tol,
            "symbolic": [algebra.check_to_dict(c) for c in symbolic],
            "numeric": [operators.report_to_dict(r) for r in numeric],
            "passed": passed,
        }
        _emit(dumps(doc) + "\n", args.out)
    else:
        head = ("p0,a,levels\n"
                f"{fmt_real(lattice.p0)},{fmt_real(lattice.a)},{lattice.n_points}\n\n")
        _emit(head + _suite_csv(symbolic, numeric), args.out)
    return 0 if passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"momlat: error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
