"""Command-line front end.

    fefbloch report --state isotropic --d 3 --theta 0.7
    fefbloch report --file rho.json --optimize --restarts 64
    fefbloch sweep example1 --from 0 --to 1 --steps 101 --out fig1.csv
    fefbloch sweep example2 --from 0 --to 1 --steps 41 --find-threshold
    fefbloch verify --level fast

Errors go to stderr as one line, ``<CODE>: <message>``, with exit status 2.
"""

import argparse
import csv
import io
import json
import sys

import numpy as np

from .bloch import decompose, validate_density
from .bounds import (
    exact_fef_thm3,
    fef_two_qubit,
    full_report,
    singlet_fraction,
    two_qubit_attained,
    upper_bound_cor1,
    upper_bound_prior,
    upper_bound_thm1,
)
from .errors import FEFError
from .matrixio import read_matrix
from .optimizer import DEFAULT_SEED, OptimizerConfig, certify, maximize_fef
from . import states

SWEEP_FAMILIES = ("example1", "example2", "phix", "rho3", "isotropic")
CSV_HEADER = ["param", "f", "thm1", "cor1", "prior", "fef_numeric", "fef_exact"]
REPORT_STATES = ("max_entangled", "isotropic", "example1", "example2", "phix", "rho3", "random")


class UsageError(FEFError, ValueError):
    code = "E_USAGE"


def _fmt(v):
    return "" if v is None else format(float(v), ".17g")


def _param_domain(family, d):
    return {
        "example1": (0.0, 1.0),
        "example2": (0.0, 1.0),
        "phix": (0.0, 0.5),
        "rho3": (0.0, 1.0),
        "isotropic": (-1 / (d * d - 1), 1.0),
    }[family]


def family_state(family, value, d=3):
    if family == "example1":
        return states.example1(value)
    if family == "example2":
        return states.example2(value)
    if family == "phix":
        return states.phi_x(value)
    if family == "rho3":
        return states.rho3(value)
    if family == "isotropic":
        return states.isotropic(d, value)
    raise UsageError(f"unknown family {family!r}; choose from {', '.join(SWEEP_FAMILIES)}")


def point_seed(base, index):
    """Per-grid-point seed, independent of evaluation order."""
    return int(np.random.SeedSequence([base, index]).generate_state(1, dtype=np.uint64)[0])


def sweep_row(family, value, d=3, optimize=False, restarts=32, seed=DEFAULT_SEED):
    rho = family_state(family, value, d)
    b = decompose(rho)
    exact = exact_fef_thm3(b)
    if exact is None and b.dim == 2 and two_qubit_attained(b):
        exact = fef_two_qubit(b)
    numeric = None
    if optimize:
        numeric = maximize_fef(rho, OptimizerConfig(restarts=restarts, seed=seed)).best_value
    return [value, singlet_fraction(b), upper_bound_thm1(b)[0], upper_bound_cor1(b),
            upper_bound_prior(b), numeric, exact]


def grid(lo, hi, steps):
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * k / (steps - 1) for k in range(steps)]


def sweep_rows(family, lo, hi, steps, d=3, optimize=False, restarts=32, seed=DEFAULT_SEED):
    dlo, dhi = _param_domain(family, d)
    if not (dlo - 1e-15 <= lo <= dhi + 1e-15 and dlo - 1e-15 <= hi <= dhi + 1e-15):
        raise UsageError(f"range [{lo}, {hi}] leaves the {family} domain [{dlo:.6g}, {dhi:.6g}]")
    lo, hi = max(lo, dlo), min(hi, dhi)
    return [sweep_row(family, v, d, optimize, restarts, point_seed(seed, k))
            for k, v in enumerate(grid(lo, hi, steps))]


def find_thresholds(family, lo, hi, steps, d=3, xtol=1e-13):
    """Parameters where the singlet fraction crosses ``1/d``, by bisection."""

    def g(v):
        rho = family_state(family, v, d)
        return singlet_fraction(decompose(rho)) - 1 / rho.dim

    pts = grid(lo, hi, steps)
    vals = [g(v) for v in pts]
    roots = []
    for (a, ga), (b, gb) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        if ga == 0:
            roots.append(a)
            continue
        if ga * gb > 0:
            continue
        while b - a > xtol:
            m = (a + b) / 2
            gm = g(m)
            if gm == 0:
                a = b = m
                break
            if (gm > 0) == (ga > 0):
                a, ga = m, gm
            else:
                b = m
        roots.append((a + b) / 2)
    if vals and vals[-1] == 0:
        roots.append(pts[-1])
    return roots


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_state(args):
    if args.file:
        _, M = read_matrix(args.file)
        return validate_density(M)
    if not args.state:
        raise UsageError("give --state or --file")
    need = {"isotropic": "theta", "example1": "a", "example2": "x", "phix": "x", "rho3": "y"}
    if args.state in need and getattr(args, need[args.state]) is None:
        raise UsageError(f"--state {args.state} needs --{need[args.state]}")
    if args.state == "max_entangled":
        return states.max_entangled(args.d)
    if args.state == "random":
        return states.random_density(args.d, None, args.seed)
    value = getattr(args, need[args.state])
    return family_state(args.state, value, args.d)


def _report_text(rep):
    def line(name, v):
        return f"{name:<26}{'-' if v is None else format(v, '.12g')}"

    bd = rep.thm1_breakdown
    out = [
        f"local dimension d = {rep.dim}",
        line("singlet fraction f", rep.singlet_fraction),
        line("upper bound (weighted)", rep.thm1_bound),
        f"  T1..T4 = {bd.t1:.12g}, {bd.t2:.12g}, {bd.t3:.12g}, {bd.t4:.12g}",
        line("upper bound (sum |t_ij|)", rep.cor1_bound),
        line("upper bound (prior KF)", rep.prior_bound),
        line("exact FEF (diagonal T)", rep.exact_thm3),
        line("two-qubit closed form", rep.two_qubit_exact),
        line("numeric FEF", rep.numeric_fef),
        line("optimal fidelity", rep.optimal_fidelity) + f"  [from {rep.fidelity_source}]",
        f"{'useful for teleportation':<26}{rep.useful_for_teleportation.value}",
    ]
    if rep.numeric_fef is not None and rep.tightest_upper - rep.numeric_fef < 1e-9:
        out.append("FEF pinned: numeric value meets the tightest upper bound")
    elif rep.tightest_upper - rep.singlet_fraction < 1e-12:
        out.append("FEF pinned: singlet fraction meets the tightest upper bound")
    return "\n".join(out) + "\n"


def cmd_report(args):
    rho = _report_state(args)
    if args.optimize:
        cfg = OptimizerConfig(restarts=args.restarts, seed=args.seed)
        rep = certify(rho, cfg)
    else:
        rep = full_report(rho)
    if args.json or args.out:
        text = json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n"
        _emit(text, args.out)
        if args.json:
            return 0
    sys.stdout.write(_report_text(rep))
    return 0


def cmd_sweep(args):
    dlo, dhi = _param_domain(args.family, args.d)
    lo = dlo if args.lo is None else args.lo
    hi = dhi if args.hi is None else args.hi
    if args.find_threshold:
        roots = find_thresholds(args.family, lo, hi, args.steps, args.d)
        _emit("threshold\n" + "".join(_fmt(r) + "\n" for r in roots), args.out)
        return 0
    rows = sweep_rows(args.family, lo, hi, args.steps, args.d, args.optimize, args.restarts, args.seed)
    _emit(rows_to_csv(rows), args.out)
    return 0


def cmd_verify(args):
    from .verify import run_suites

    results = run_suites(args.level, echo=print)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} suites passed")
    return 1 if failed else 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{UsageError.code}: {message}\n")


def build_parser():
    ap = _Parser(prog="fefbloch", description="Fully entangled fraction bounds for d x d states.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--d", type=int, default=3, help="local dimension (isotropic, random, max_entangled)")
        p.add_argument("--optimize", action="store_true", help="run the numeric maximizer")
        p.add_argument("--restarts", type=int, default=32)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", help="write output to this file")

    rp = sub.add_parser("report", help="bounds and exact values for one state")
    rp.add_argument("--state", choices=REPORT_STATES)
    rp.add_argument("--file", help="JSON matrix file (format 1)")
    rp.add_argument("--theta", type=float)
    rp.add_argument("--a", type=float)
    rp.add_argument("--x", type=float)
    rp.add_argument("--y", type=float)
    rp.add_argument("--json", action="store_true", help="print the report as JSON")
    common(rp)
    rp.set_defaults(func=cmd_report)

    sp = sub.add_parser("sweep", help="CSV of bounds along a one-parameter family")
    sp.add_argument("family", choices=SWEEP_FAMILIES)
    sp.add_argument("--from", dest="lo", type=float)
    sp.add_argument("--to", dest="hi", type=float)
    sp.add_argument("--steps", type=int, default=101)
    sp.add_argument("--find-threshold", action="store_true",
                    help="print parameters where f crosses 1/d instead of the sweep")
    common(sp)
    sp.set_defaults(func=cmd_sweep)

    vp = sub.add_parser("verify", help="run the randomized invariant suites")
    vp.add_argument("--level", choices=("fast", "full"), default="fast")
    vp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except FEFError as exc:
        msg = str(exc).replace("\n", " ")
        print(f"{exc.code}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
