"""Command-line entry point.

Exit codes: 0 success, 2 bad arguments, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import __version__, oracle
from .charmat import char_function, mode_coefficients
from .model import (
    DomainKind,
    SpecError,
    check_specs,
    effective_domain,
    navier,
    parse_bc,
    parse_domain,
    shell,
    dirichlet,
)
from .rootfind import DEFAULT_TOL, ConvergenceError, ResolutionWarning, eigenvalues
from .spectrum import (
    InternalConsistencyError,
    NoSignChangeError,
    branch_sweep,
    crossing_brackets,
    euler_eigenvalues,
    first_eigenvalue,
    fundamental_tone,
    threshold_find,
)
from .svgplot import Series, line_chart

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

ORACLE_GAP_TOL = 1e-3
ORACLE_SELF_TOL = 1e-4
EULER_GAP_TOL = 1e-4


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


# ---------------------------------------------------------------- output


def fmt_float(x) -> str:
    return f"{float(x):.17g}"


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple, frozenset, set)):
        items = sorted(v) if isinstance(v, (set, frozenset)) else v
        return "[" + ", ".join(_json_value(x) for x in items) + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def to_json(obj) -> str:
    """JSON with every float printed at 17 significant digits."""
    return _json_value(obj) + "\n"


def to_csv(header, rows, metadata: dict) -> str:
    buf = io.StringIO()
    for k, v in metadata.items():
        buf.write(f"# {k}: {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def read_csv(path_or_text: str):
    """(metadata, header, rows) from a CSV written by :func:`to_csv`; numbers come back as floats."""
    text = path_or_text
    if "\n" not in text:
        with open(text) as fh:
            text = fh.read()
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, _, v = line[2:].partition(": ")
            meta[k] = v
        elif line:
            body.append(line)
    rows = list(csv.reader(body))
    header, data = rows[0], rows[1:]

    def conv(x):
        try:
            return float(x)
        except ValueError:
            return x

    return meta, header, [[conv(x) for x in r] for r in data]


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _metadata(args, **extra) -> dict:
    meta = {"artifact_version": __version__, "command": args.command}
    for k, v in sorted(vars(args).items()):
        if k in ("command", "func", "out", "format", "svg") or v is None:
            continue
        meta[k] = v
    meta.update(extra)
    return meta


# ---------------------------------------------------------------- parsing helpers


def _problem(args):
    if args.dim is None:
        raise UsageError("--dim is required")
    try:
        d = parse_domain(args.domain, args.dim)
        b = parse_bc(args.bc)
        check_specs(d, b)
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    return d, b


def _int_list(text: str, what: str):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} list {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise UsageError(f"{what} list must hold nonnegative integers, got {text!r}")
    return vals


def _positive(x, name):
    if x is not None and not x > 0:
        raise UsageError(f"{name} must be positive, got {x}")


# ---------------------------------------------------------------- commands


def cmd_compute(args) -> int:
    d, b = _problem(args)
    _positive(args.tol_root, "--tol-root")
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    ell = _int_list(str(args.ell), "--ell")[0]
    pts = eigenvalues(d, b, ell, args.count, tol_t=args.tol_root)
    meta = _metadata(args, effective_domain=effective_domain(d).encode())
    records = [p.as_dict() for p in pts]
    if args.format == "csv":
        text = to_csv(["ell", "t", "lambda", "multiplicity"],
                      [[r["ell"], r["t"], r["lambda"], r["multiplicity"]] for r in records], meta)
    else:
        text = to_json({"metadata": meta, "records": records})
    _emit(text, args.out)
    return EXIT_OK


def cmd_fundamental(args) -> int:
    d, b = _problem(args)
    if args.ell_max < 1:
        raise UsageError("--ell-max must be >= 1")
    ft = fundamental_tone(d, b, ell_max=args.ell_max, tol_t=args.tol_root)
    rec = {
        "dim": d.dim,
        "domain": d.encode(),
        "bc": b.kind.value,
        "sigma": b.sigma,
        "a": d.a,
        "lambda": ft.lam,
        "ell_star": sorted(ft.ell_star),
        "multiplicity": ft.multiplicity,
        "degenerate": ft.degenerate,
        "branch_values": {str(k): v for k, v in ft.branch_values.items()},
    }
    _emit(to_json({"metadata": _metadata(args), "records": [rec]}), args.out)
    return EXIT_OK


def _sweep_grid(args):
    start, end, steps = args.inner_start, args.inner_end, args.steps
    if steps < 2:
        raise UsageError("--steps must be >= 2")
    if not 0.0 <= start < end < 1.0:
        raise UsageError(f"need 0 <= --inner-start < --inner-end < 1, got {start}, {end}")
    if args.spacing == "log":
        if start <= 0:
            raise UsageError("log spacing needs --inner-start > 0")
        return np.geomspace(start, end, steps)
    return np.linspace(start, end, steps)


def sweep_svg(table, title: str = "") -> str:
    series = []
    styles = {0: (False, "#000000"), 1: (True, "#000000")}
    for ell in sorted({r.ell for r in table.rows}):
        a, lam = table.branch(ell)
        dashed, color = styles.get(ell, (True, "#777777"))
        series.append(Series(a, lam, f"l = {ell}", dashed=dashed, color=color))
    return line_chart(series, title=title, xlabel="inner radius a", ylabel="first eigenvalue")


def cmd_sweep(args) -> int:
    if args.dim is None:
        raise UsageError("--dim is required")
    try:
        b = parse_bc(args.bc)
        check_specs(shell(args.dim, 0.5), b)
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    ells = _int_list(str(args.ell), "--ell")
    grid = _sweep_grid(args)
    table = branch_sweep(b, args.dim, ells, grid, tol_t=args.tol_root)
    meta = _metadata(args, **{f"sweep_{k}": v for k, v in table.metadata.items()})
    bad = [r for r in table.rows if r.error]
    if bad:
        meta["failed_points"] = len(bad)
    rows = [[r.a, r.ell, r.t1, r.lambda1] for r in table.rows]
    title = f"N = {args.dim}, {b.encode()}"
    if args.format == "svg":
        _emit(sweep_svg(table, title), args.out)
    elif args.format == "json":
        recs = [{"a": r.a, "ell": r.ell, "t1": r.t1, "lambda1": r.lambda1, "error": r.error} for r in table.rows]
        _emit(to_json({"metadata": meta, "records": recs}), args.out)
    else:
        _emit(to_csv(["a", "ell", "t1", "lambda1"], rows, meta), args.out)
    if args.svg:
        _emit(sweep_svg(table, title), args.svg)
    if len(bad) == len(table.rows):
        raise NumericalError(f"every sweep point failed; first error: {bad[0].error}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    if args.dim is None:
        raise UsageError("--dim is required")
    try:
        b = parse_bc(args.bc)
        check_specs(shell(args.dim, 0.5), b)
    except SpecError as exc:
        raise UsageError(str(exc)) from None
    _positive(args.tol_a, "--tol-a")
    lo, hi = args.inner_start, args.inner_end
    if not 0.0 < lo < hi < 1.0:
        raise UsageError(f"need 0 < --inner-start < --inner-end < 1, got {lo}, {hi}")
    brackets = crossing_brackets(b, args.dim, lo, hi, args.steps, tol_t=args.tol_root)
    if not brackets:
        raise NoSignChangeError(f"no l=0/l=1 crossing found on [{lo}, {hi}] with {args.steps} grid points")
    a_lo, a_hi = brackets[0]
    a_star = threshold_find(b, args.dim, a_lo, a_hi, tol_a=args.tol_a, tol_t=args.tol_root)
    rec = {"dim": args.dim, "bc": b.kind.value, "sigma": b.sigma, "a_star": a_star,
           "bracket": [a_lo, a_hi], "crossings_found": len(brackets)}
    _emit(to_json({"metadata": _metadata(args), "records": [rec]}), args.out)
    return EXIT_OK


def default_regression_set():
    """(a, N, ell, bc) cases cross-checked by ``oracle-check`` when no list is given."""
    bcs = (dirichlet(), navier(0.0), navier(0.5))
    return [(a, N, ell, b) for a in (0.3, 0.5, 0.7) for N in (2, 3, 4) for ell in (0, 1, 2) for b in bcs]


def parse_cases(text: str):
    """``a,N,ell,bc;...`` with bc in the --bc encoding."""
    cases = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        parts = item.split(",")
        if len(parts) != 4:
            raise UsageError(f"malformed case {item!r}; expected a,N,ell,bc")
        try:
            a, N, ell = float(parts[0]), int(parts[1]), int(parts[2])
            b = parse_bc(parts[3])
            check_specs(shell(N, a), b)
        except (ValueError, SpecError) as exc:
            raise UsageError(f"malformed case {item!r}: {exc}") from None
        if ell < 0:
            raise UsageError(f"malformed case {item!r}: negative degree")
        cases.append((a, N, ell, b))
    if not cases:
        raise UsageError("empty case list")
    return cases


def oracle_rows(cases, n: int, tol_t: float = DEFAULT_TOL):
    rows = []
    for a, N, ell, b in cases:
        lam_det = first_eigenvalue(shell(N, a), b, ell, tol_t)
        lam_n = oracle.smallest_eigenvalue(oracle.assemble(ell, N, b, a, n))
        lam_2n = oracle.smallest_eigenvalue(oracle.assemble(ell, N, b, a, 2 * n))
        rows.append({
            "case": f"{a!r},{N},{ell},{b.encode()}",
            "determinant_lambda": lam_det,
            "oracle_lambda_n": lam_n,
            "oracle_lambda_2n": lam_2n,
            "self_change": abs(lam_n - lam_2n) / lam_2n,
            "gap": abs(lam_2n - lam_det) / lam_det,
        })
    return rows


def euler_row(a: float = 0.1, n: int = 2048):
    exact = euler_eigenvalues(a, 1)[0]
    disc = oracle.euler_smallest(a, n)
    return {"case": f"euler a={a!r} n={n}", "formula_lambda": exact, "oracle_lambda": disc,
            "gap": abs(disc - exact)}


def cmd_oracle_check(args) -> int:
    if args.n < 8:
        raise UsageError("--n must be >= 8")
    cases = parse_cases(args.cases) if args.cases else default_regression_set()
    rows = oracle_rows(cases, args.n, args.tol_root)
    eu = euler_row()
    failed = [r["case"] for r in rows if r["gap"] > ORACLE_GAP_TOL or r["self_change"] > ORACLE_SELF_TOL]
    if eu["gap"] > EULER_GAP_TOL:
        failed.append(eu["case"])
    meta = _metadata(args, cases=len(rows), gap_tol=ORACLE_GAP_TOL, self_change_tol=ORACLE_SELF_TOL,
                     failed=len(failed))
    if args.format == "json":
        _emit(to_json({"metadata": meta, "records": rows, "euler": eu}), args.out)
    else:
        keys = ["case", "determinant_lambda", "oracle_lambda_n", "oracle_lambda_2n", "self_change", "gap"]
        body = [[r[k] for k in keys] for r in rows]
        body.append([eu["case"], eu["formula_lambda"], eu["oracle_lambda"], eu["oracle_lambda"], 0.0, eu["gap"]])
        _emit(to_csv(keys, body, meta), args.out)
    if failed:
        print(f"oracle-check: {len(failed)} case(s) out of tolerance: {', '.join(failed)}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_profile(args) -> int:
    d, b = _problem(args)
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    ell = _int_list(str(args.ell), "--ell")[0]
    pts = eigenvalues(d, b, ell, args.count, tol_t=args.tol_root)
    t = pts[-1].t
    try:
        prof = mode_coefficients(char_function(d, b, ell), t)
    except ValueError as exc:
        raise NumericalError(str(exc)) from None
    eff = effective_domain(d)
    if eff.kind is DomainKind.PUNCTURED:
        # the origin value is zero by construction; start one cell out
        r = np.arange(1, args.points + 1) / args.points
    else:
        r = np.linspace(eff.a, 1.0, args.points)
    f = prof(r)
    meta = _metadata(args, t=fmt_float(t), **{"lambda": fmt_float(t**4)},
                     coefficients=" ".join(fmt_float(c) for c in prof.coefficients))
    _emit(to_csv(["r", "f"], list(zip(r.tolist(), np.asarray(f).tolist())), meta), args.out)
    return EXIT_OK


def cmd_specfun_eval(args) -> int:
    from .specfun import ultra

    v = ultra(args.kind, args.ell, args.dim, args.x)
    _emit(to_json({"mantissa": float(v.mantissa), "log_scale": float(v.log_scale), "value": float(v.value)}),
          args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="biharmonic", description="Bilaplacian eigenvalues on balls, punctured balls and shells.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, domain=True, fmt=("json", "csv"), ell="0"):
        sp.add_argument("--dim", type=int, help="space dimension N >= 2")
        if domain:
            sp.add_argument("--domain", default="ball", help="ball | punctured | shell:a=<float>")
        sp.add_argument("--bc", default="dirichlet", help="dirichlet | navier:sigma=<float>")
        if ell is not None:
            sp.add_argument("--ell", default=ell, help="spherical-harmonic degree")
        sp.add_argument("--tol-root", type=float, default=DEFAULT_TOL, help="root bracket width in t")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--format", choices=fmt, default=fmt[0])

    sp = sub.add_parser("compute", help="first eigenvalues of one degree")
    common(sp)
    sp.add_argument("--count", type=int, default=1)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("fundamental", help="fundamental tone and minimising degrees")
    common(sp, fmt=("json",), ell=None)
    sp.add_argument("--ell-max", type=int, default=4)
    sp.set_defaults(func=cmd_fundamental)

    sp = sub.add_parser("sweep", help="first eigenvalue per degree across inner radii")
    common(sp, domain=False, fmt=("csv", "json", "svg"), ell="0,1")
    sp.add_argument("--inner-start", type=float, default=1e-4)
    sp.add_argument("--inner-end", type=float, default=0.012)
    sp.add_argument("--steps", type=int, default=25)
    sp.add_argument("--spacing", choices=("linear", "log"), default="linear")
    sp.add_argument("--svg", help="also write an SVG plot to this path")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("threshold", help="inner radius where the l=0 and l=1 branches cross")
    common(sp, domain=False, fmt=("json",), ell=None)
    sp.add_argument("--inner-start", type=float, default=1e-4)
    sp.add_argument("--inner-end", type=float, default=0.012)
    sp.add_argument("--steps", type=int, default=16, help="geometric grid points used to bracket")
    sp.add_argument("--tol-a", type=float, default=1e-7)
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("oracle-check", help="determinant route vs discretised quotient")
    sp.add_argument("--cases", help="a,N,ell,bc;... (default: built-in regression set)")
    sp.add_argument("--n", type=int, default=32, help="cells of the coarse mesh; 2n is also run")
    sp.add_argument("--tol-root", type=float, default=DEFAULT_TOL)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_oracle_check)

    sp = sub.add_parser("profile", help="radial profile of an eigenfunction")
    common(sp, fmt=("csv",))
    sp.add_argument("--count", type=int, default=1, help="which root of the degree (1 = first)")
    sp.add_argument("--points", type=int, default=512)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("specfun-eval")
    sp.add_argument("--kind", choices=("j", "y", "i", "k"), required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_specfun_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help / --version exit 0, argument errors exit 2
        return int(exc.code or 0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", ResolutionWarning)
            return args.func(args)
    except (NoSignChangeError, ConvergenceError, NumericalError, InternalConsistencyError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"{parser.prog}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
