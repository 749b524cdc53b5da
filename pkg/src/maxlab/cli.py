"""Command-line front end: ``maxlab <command> ...`` or ``python -m maxlab``.

Exit status is 0 on success, 1 when a verification fails, 2 on bad input.
Results go to stdout unless ``--output-dir`` is given, in which case they are
written to ``<output-dir>/<command>.<format>`` (plus SVGs with ``--plot``).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, coverings, quadrature
from .errors import InputError, MaxLabError, PreconditionViolated, UnsupportedDimension
from .io import family_from_json, load_function, load_json, load_measure
from .maximal import KINDS, MaximalProfile, evaluate_on_mesh
from .measure import as_rational
from .report import experiment_row, line_plot, to_csv, to_json, write_text

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def _rational(field):
    def parse(text):
        try:
            return as_rational(text)
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"{field}: not a rational number: {text!r}")
    return parse


def _exponent(field):
    def parse(text):
        try:
            p = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{field}: not a number: {text!r}")
        if not p > 1 or not math.isfinite(p):
            raise argparse.ArgumentTypeError(f"{field}: must be a finite number > 1, got {text!r}")
        return p
    return parse


def _positive_float(field):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{field}: not a number: {text!r}")
        if not v > 0:
            raise argparse.ArgumentTypeError(f"{field}: must be positive, got {text!r}")
        return v
    return parse


def _positive_int(field):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{field}: not an integer: {text!r}")
        if v < 1:
            raise argparse.ArgumentTypeError(f"{field}: must be at least 1, got {text!r}")
        return v
    return parse


def _exponent_list(field):
    def parse(text):
        if not text.strip():
            return []
        return [_exponent(field)(part) for part in text.split(",")]
    return parse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", type=Path, help="write results here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--plot", action="store_true", help="also write SVG plots (needs --output-dir)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=_positive_float("tol"), default=1e-10)

    parser = _Parser(prog="maxlab", description="Exact maximal functions of step functions on the line.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def data_args(p, need_function=True):
        p.add_argument("--measure", required=True, help="measure JSON file, or 'lebesgue'")
        if need_function:
            p.add_argument("--function", required=True, help="step function JSON file")

    p = sub.add_parser("eval", parents=[common], help="maximal function on a mesh")
    data_args(p)
    p.add_argument("--kind", choices=KINDS, default="two_sided")
    p.add_argument("--mesh", help="lo:hi:n uniform rational mesh, e.g. --mesh=-2:3:11")
    p.add_argument("--points", help="comma-separated rational points")

    p = sub.add_parser("norm", parents=[common], help="L^p norm of f and of Mf")
    data_args(p)
    p.add_argument("--p", type=_exponent("p"), required=True)

    p = sub.add_parser("ratio", parents=[common], help="||Mf||_p / ||f||_p")
    data_args(p)
    p.add_argument("--p", type=_exponent("p"), required=True)

    p = sub.add_parser("sunrise-check", parents=[common], help="level-set identity for the one-sided maximal function")
    data_args(p)
    p.add_argument("--t", type=_rational("t"), required=True)
    p.add_argument("--max-residual", type=_positive_float("max-residual"), default=1e-9)

    p = sub.add_parser("cover", parents=[common], help="average-t covering of {f > t}")
    data_args(p)
    p.add_argument("--t", type=_rational("t"), required=True)
    p.add_argument("--unimodal", action="store_true", help="single-ball construction for unimodal f")
    p.add_argument("--verify", action="store_true", help="verify the family before writing it")
    p.add_argument("--L", type=_positive_int("L"), default=1)

    p = sub.add_parser("verify", parents=[common], help="check a covering family")
    data_args(p)
    p.add_argument("--family", required=True, help="covering family JSON file")
    p.add_argument("--t", type=_rational("t"), help="level; defaults to the family's own")
    p.add_argument("--L", type=_positive_int("L"), default=1)

    p = sub.add_parser("search-min-ratio", parents=[common], help="search for small ||Mg||_p/||g||_p")
    p.add_argument("--measure", default="lebesgue")
    p.add_argument("--p", type=_exponent("p"), required=True)
    p.add_argument("--k", type=_positive_int("k"), default=6)
    p.add_argument("--budget", type=_positive_int("budget"), default=2000)
    p.add_argument("--restarts", type=_positive_int("restarts"), default=8)

    p = sub.add_parser("reproduce", help="reproduce a worked example")
    rep = p.add_subparsers(dest="example", required=True, parser_class=_Parser)
    q = rep.add_parser("example-4.1", aliases=["discrete-atoms"], parents=[common],
                       help="discrete atoms with ratio close to 1")
    q.set_defaults(handler="discrete-atoms")
    q.add_argument("--t", type=_rational("t"), required=True)
    q.add_argument("--p", type=_exponent("p"), required=True)
    q.add_argument("--N", type=_positive_int("N"), default=40)
    q = rep.add_parser("example-final", aliases=["one-atom"], parents=[common], help="one atom on a half-line")
    q.set_defaults(handler="one-atom")
    q.add_argument("--t", type=_rational("t"), required=True)
    q.add_argument("--p", type=_exponent("p"), required=True)
    q.add_argument("--samples", type=_positive_int("samples"), default=50)

    p = sub.add_parser("constants", parents=[common], help="lower-bound constants")
    p.add_argument("--p", type=_exponent("p"), required=True)
    p.add_argument("--L", type=_positive_int("L"), default=1)

    p = sub.add_parser("holder", parents=[common], help="report-only exponent comparison of search estimates")
    p.add_argument("--measure", default="lebesgue")
    p.add_argument("--p-list", type=_exponent_list("p-list"), required=True)
    p.add_argument("--r-list", type=_exponent_list("r-list"), required=True)
    p.add_argument("--k", type=_positive_int("k"), default=4)
    p.add_argument("--budget", type=_positive_int("budget"), default=400)
    p.add_argument("--restarts", type=_positive_int("restarts"), default=4)
    return parser


# -- commands --------------------------------------------------------------------------


def _mesh(args):
    if args.points:
        pts = [_rational("points")(s) for s in args.points.split(",")]
    elif args.mesh:
        parts = args.mesh.split(":")
        if len(parts) != 3:
            raise InputError("mesh", "expected lo:hi:n")
        lo, hi = _rational("mesh")(parts[0]), _rational("mesh")(parts[1])
        n = _positive_int("mesh")(parts[2])
        if hi <= lo or n < 2:
            raise InputError("mesh", "need lo < hi and n >= 2")
        pts = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    else:
        raise InputError("mesh", "give --mesh or --points")
    pts = sorted(set(pts))
    return pts


def cmd_eval(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    mesh = _mesh(args)
    ev = evaluate_on_mesh(mu, f, mesh, args.kind)
    rows = []
    for x, mv in zip(ev.mesh, ev.values):
        w = mv.witness
        rows.append({"x": x, "f": f(x), "value": mv.value, "value_exact": str(mv.value),
                     "witness": str(w) if w is not None else "", "supremum_only": mv.supremum_only})
    out.table(rows, ("x", "f", "value", "value_exact", "witness", "supremum_only"))
    if out.plot:
        xs = [float(x) for x in ev.mesh]
        out.svg("eval", [("f", xs, [float(f(x)) for x in ev.mesh]), ("Mf", xs, ev.floats().tolist())],
                "maximal function", "x", "value")
    return EXIT_OK


def cmd_norm(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    fn = quadrature.lp_norm_step(f, mu, args.p)
    mn = quadrature.maximal_norm(mu, f, args.p, args.tol)
    out.table([experiment_row("norm f", args.p, None, fn.value, fn.error_bound),
               experiment_row("norm Mf", args.p, None, mn.value, mn.error_bound)])
    return EXIT_OK


def cmd_ratio(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    r = quadrature.ratio(mu, f, args.p, args.tol)
    c = bounds.constants(args.p, 1)
    floor = c.lerner if mu.is_atomless and mu.left_tail_density > 0 and mu.right_tail_density > 0 else None
    out.table([experiment_row("ratio", args.p, None, r.value, floor,
                              r.value - floor if floor is not None else None)])
    return EXIT_OK


def cmd_sunrise(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    rep = coverings.sunrise_check(mu, f, args.t)
    rows = [experiment_row("sunrise lhs", None, args.t, rep.lhs),
            experiment_row("sunrise rhs", None, args.t, rep.rhs),
            experiment_row("sunrise residual", None, args.t, rep.residual, args.max_residual,
                           args.max_residual - rep.residual, rep.exact_residual)]
    out.table(rows, extra={"level_set": [str(iv) for iv in rep.level_set]})
    return EXIT_OK if rep.residual <= args.max_residual else EXIT_FAILED


def _family_rows(fam):
    return [{"lo": b.lo, "hi": b.hi, "lo_closed": b.lo_closed, "hi_closed": b.hi_closed,
             "lo_exact": str(b.lo), "hi_exact": str(b.hi), "average": str(a), "side": s}
            for b, a, s in zip(fam.balls, fam.averages, fam.side_labels)]


def cmd_cover(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    build = coverings.unimodal_covering if args.unimodal else coverings.covering_selection
    fam = build(mu, f, args.t)
    status = EXIT_OK
    if args.verify:
        rep = coverings.verify_covering(fam, mu, f, args.t, args.L)
        for problem in rep.problems:
            print(f"verify: {problem}", file=sys.stderr)
        status = EXIT_OK if rep.ok else EXIT_FAILED
    if out.format == "json":
        out.raw(to_json(fam.to_json()))
    else:
        out.table(_family_rows(fam), ("lo", "hi", "lo_closed", "hi_closed", "lo_exact", "hi_exact", "average", "side"))
    return status


def cmd_verify(args, out):
    mu, f = load_measure(args.measure), load_function(args.function)
    fam = family_from_json(load_json(args.family, "family"))
    t = args.t if args.t is not None else fam.t
    rep = coverings.verify_covering(fam, mu, f, t, args.L)
    rows = [{"check": name, "ok": getattr(rep, name)} for name in
            ("averages_ok", "coverage_ok", "overlap_ok", "identity_ok", "ok")]
    rows.append({"check": "max_overlap", "ok": rep.max_overlap})
    out.table(rows, ("check", "ok"), extra={"problems": rep.problems})
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_search(args, out):
    mu = load_measure(args.measure)
    res = bounds.search_min_ratio(mu, args.p, args.k, args.budget, args.seed, args.restarts)
    floor = bounds.lerner_constant(args.p)
    rows = [experiment_row("search best ratio", args.p, args.seed, res.best_ratio, floor, res.best_ratio - floor)]
    rows += [experiment_row(f"history {i}", args.p, args.seed, v) for i, v in res.history]
    best = res.best_f
    extra = {"best_f": {"breakpoints": [str(b) for b in best.breakpoints], "values": [str(v) for v in best.values],
                        "point_values": [str(v) for v in best.point_values]} if best else None,
             "evaluations": res.evaluations}
    out.table(rows, extra=extra)
    if out.plot and res.history:
        out.svg("search-history", [("best ratio", [i for i, _ in res.history], [v for _, v in res.history]),
                                   ("floor", [1, res.evaluations], [floor, floor])],
                "search history", "evaluation", "ratio", logx=True)
    return EXIT_OK


def cmd_discrete_atoms(args, out):
    mu, f = bounds.example_discrete_atoms(args.t, args.N)
    r = quadrature.ratio(mu, f, args.p, args.tol)
    closed_inf = bounds.discrete_atoms_ratio_power(args.t, args.p)
    closed_n = bounds.discrete_atoms_ratio_power(args.t, args.p, args.N)
    tail = bounds.discrete_atoms_tail_bound(args.t, args.p, args.N)
    power = r.value ** args.p
    rows = [
        experiment_row("discrete-atoms ratio", args.p, args.t, r.value, closed_inf ** (1 / args.p),
                       r.value - closed_inf ** (1 / args.p)),
        experiment_row("discrete-atoms ratio^p vs truncated", args.p, args.t, power, closed_n, power - closed_n),
        experiment_row("discrete-atoms ratio^p vs infinite", args.p, args.t, power, closed_inf, power - closed_inf),
        experiment_row("discrete-atoms tail bound", args.p, args.t, tail),
    ]
    out.table(rows)
    ok = abs(power - closed_inf) <= 1e-9 + tail + args.p * power * r.error_bound / max(r.value, 1e-300)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_one_atom(args, out):
    t, p = args.t, args.p
    mu, f = bounds.example_one_atom(t)
    prof = MaximalProfile(mu, f)
    xs = [1 + Fraction(3 * i, args.samples) for i in range(args.samples)]
    pointwise_ok = all(prof.value_at(x).value == 1 / (t + x) for x in xs)
    pointwise_ok &= all(prof.value_at(Fraction(i, 7)).value == 1 for i in range(1, 7))
    mn = quadrature.maximal_norm(mu, f, p, args.tol)
    power = mn.value ** p
    closed = bounds.one_atom_norm_power(t, p)
    upper = bounds.one_atom_upper_bound(t, p)
    rows = [
        experiment_row("one-atom pointwise", p, t, float(pointwise_ok)),
        experiment_row("one-atom norm^p", p, t, power, closed, power - closed),
        experiment_row("one-atom upper bound", p, t, power, upper, upper - power),
    ]
    out.table(rows)
    ok = pointwise_ok and abs(power - closed) <= 1e-6 and power <= upper
    if out.plot:
        grid = np.linspace(-1, 6, 701)
        out.svg("one-atom", [("f", grid, [float(f(as_rational(float(x)))) for x in grid]),
                                  ("Mf", grid, prof.evaluate(grid).tolist())], "one-atom example", "x", "value")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_constants(args, out):
    c = bounds.constants(args.p, args.L)
    out.table([experiment_row("lerner", c.p, None, c.lerner),
               experiment_row("besicovitch", c.p, c.L, c.besicovitch),
               experiment_row("besicovitch L=1 minus lerner", c.p, 1, bounds.besicovitch_constant(c.p, 1) - c.lerner)])
    return EXIT_OK


def cmd_holder(args, out):
    mu = load_measure(args.measure)
    rows = bounds.holder_experiment(mu, args.p_list, args.r_list, args.k, args.budget, args.seed, args.restarts)
    table = [{"p": r.p, "r": r.r, "est_p": r.est_p, "est_r": r.est_r, "est_p_pow_p_over_r": r.est_p_power}
             for r in rows]
    out.table(table, ("p", "r", "est_p", "est_r", "est_p_pow_p_over_r"), extra={"note": "report only"})
    return EXIT_OK


COMMANDS = {
    "eval": cmd_eval, "norm": cmd_norm, "ratio": cmd_ratio, "sunrise-check": cmd_sunrise, "cover": cmd_cover,
    "verify": cmd_verify, "search-min-ratio": cmd_search, "constants": cmd_constants, "holder": cmd_holder,
}


class _Output:
    """Collects the single result document and writes it once."""

    def __init__(self, name: str, args):
        self.name = name
        self.format = args.format
        self.dir = args.output_dir
        self.plot = args.plot
        self.text = ""
        self.svgs = []

    def table(self, rows, columns=None, extra=None):
        if self.format == "json":
            payload = {"rows": rows}
            if extra:
                payload.update(extra)
            self.text = to_json(payload)
        else:
            self.text = to_csv(rows, columns)

    def raw(self, text):
        self.text = text

    def svg(self, stem, series, title, xlabel, ylabel, logx=False):
        self.svgs.append((stem, series, title, xlabel, ylabel, logx))

    def flush(self):
        if self.dir is None:
            sys.stdout.write(self.text)
            return
        write_text(self.text, self.dir / f"{self.name}.{self.format}")
        for stem, series, title, xlabel, ylabel, logx in self.svgs:
            line_plot(self.dir / f"{stem}.svg", series, title, xlabel, ylabel, logx)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "reproduce":
        name = args.handler
        handler = cmd_discrete_atoms if name == "discrete-atoms" else cmd_one_atom
    else:
        handler, name = COMMANDS[args.command], args.command
    if args.plot and args.output_dir is None:
        print("error: plot: --plot needs --output-dir", file=sys.stderr)
        return EXIT_INPUT
    out = _Output(name, args)
    try:
        status = handler(args, out)
    except (InputError, PreconditionViolated, UnsupportedDimension, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MaxLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
