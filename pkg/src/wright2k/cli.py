"""Command-line front end.

    wright2k eval --lambda -0.5 --mu 0.5 --t 1 --x 0:0.5:5
    wright2k validate --suite closed-forms
    wright2k demo --problem tworod
    wright2k oracle --lambda -0.5 --mu 0.5 --z -1

Exit codes: 0 success, 1 a validation threshold failed, 2 domain error,
3 bad command line, 4 the series oracle did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import fracpde
from .core import (
    EvalPoint,
    ToleranceProfile,
    WrightOrder,
    balanced_params,
    mainardi_eval,
    select_contour,
    trapezoid_sum,
    wright_eval,
    wright_grid,
)
from .errors import DomainError, WrightError
from .oracles import closed_form_mainardi, wright_series

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 3
EXIT_NOCONV = 4

EVAL_FIELDS = ["lambda", "mu_re", "mu_im", "t", "x", "re", "im", "est_roundoff", "n_nodes"]

HEATMAP_LAMBDAS = [-0.9, -0.7, -0.5, -0.3, -0.1]
HEATMAP_MU_RE = [-1.0, 0.0, 0.5, 1.0, 2.0, 3.0]
HEATMAP_MU_IM = [-1.0, 0.0, 1.0]
HEATMAP_LIMIT = 1e-9

CLOSED_FORMS = [
    # (name, nu, oracle kind, threshold)
    ("M0", 0.0, "exp0", 1e-12),
    ("M1/2", 0.5, "gauss_half", 1e-12),
    ("M1/3", 1.0 / 3.0, "airy_third", 1e-10),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- number and range parsing -------------------------------------------------


def _number(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_range(text: str) -> list[float]:
    """Expand ``start:step:stop`` (stop included within half a step) or a
    comma-separated list of numbers."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"range must be start:step:stop, got {text!r}")
        for p in parts:
            _number(p)
        # exact decimal arithmetic so that -5:0.1:5 hits 0 and 0.1 exactly
        start, step, stop = (Fraction(p.strip()) for p in parts)
        if step == 0 or (stop - start) * step < 0:
            raise argparse.ArgumentTypeError(f"step {step} never reaches {stop} from {start}")
        count = math.floor((stop - start) / step + Fraction(1, 2)) + 1
        return [float(start + k * step) for k in range(count)]
    return [_number(p) for p in text.split(",") if p.strip()]


def _values(tokens: Sequence[str]) -> list[float]:
    out: list[float] = []
    for tok in tokens:
        out.extend(parse_range(tok))
    return out


# -- output -------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        # repr gives the shortest string that round-trips
        return repr(float(value))
    return str(value)


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def render(records: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        rows = [{k: _jsonable(r[k]) for k in fields} for r in records]
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for r in records:
        writer.writerow([_fmt(r[k]) for k in fields])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _tolerance(args) -> ToleranceProfile:
    return ToleranceProfile(eps_target=args.tol)


# -- eval ---------------------------------------------------------------------


def cmd_eval(args) -> int:
    tol = _tolerance(args)
    mu = complex(args.mu, args.mu_im)
    order = WrightOrder(args.lam, mu)
    records = []
    for x in _values(args.x):
        res = wright_eval(order, EvalPoint(args.t, x), tol)
        val = complex(res.value)
        records.append({
            "lambda": args.lam, "mu_re": mu.real, "mu_im": mu.imag, "t": args.t, "x": x,
            "re": val.real, "im": val.imag, "est_roundoff": res.est_roundoff,
            "n_nodes": res.contour.n_nodes,
        })
    _emit(render(records, EVAL_FIELDS, args.format), args.out)
    return EXIT_OK


# -- validate -------------------------------------------------------------------


def _closed_form_rows(tol, xs):
    rows = []
    for name, nu, kind, limit in CLOSED_FORMS:
        ref = np.array([closed_form_mainardi(kind, x) for x in xs])
        got = mainardi_eval(nu, xs, tol)
        err = float(np.max(np.abs(got - ref) / np.abs(ref)))
        rows.append({"case": name, "nu": nu, "max_rel_err": err, "threshold": limit,
                     "pass": err <= limit})
    return rows


def suite_closed_forms(args):
    xs = np.array(parse_range("0:0.25:5"))
    rows = _closed_form_rows(_tolerance(args), xs)
    return rows, ["case", "nu", "max_rel_err", "threshold", "pass"]


def heatmap_box(lam: float, mu: complex, xs: np.ndarray, tol: ToleranceProfile,
                max_terms: int = 1000) -> tuple[float, bool]:
    """2-norm relative error of the quadrature against the dd series on ``xs``."""
    got = wright_grid(WrightOrder(lam, mu), 1.0, xs, tol)
    ref = np.empty(xs.shape, dtype=complex)
    converged = True
    for i, x in enumerate(xs):
        s = wright_series(lam, mu, -abs(float(x)), precision="dd", max_terms=max_terms)
        ref[i] = s.value
        converged &= s.converged
    with np.errstate(all="ignore"):
        err = float(np.linalg.norm(got - ref) / np.linalg.norm(ref))
    if not math.isfinite(err):
        err = math.inf
    return err, converged


def suite_heatmap(args):
    tol = _tolerance(args)
    xs = np.linspace(-5.0, 0.0, args.points)
    rows = []
    for lam in args.lambdas:
        for a in args.mu_re:
            for b in args.mu_im:
                err, conv = heatmap_box(lam, complex(a, b), xs, tol)
                log_err = math.log10(err) if 0.0 < err < math.inf else (
                    -math.inf if err == 0.0 else math.inf)
                rows.append({"lambda": lam, "mu_re": a, "mu_im": b, "rel_err": err,
                             "log10_err": log_err, "oracle_converged": conv,
                             "pass": conv and err <= HEATMAP_LIMIT})
    return rows, ["lambda", "mu_re", "mu_im", "rel_err", "log10_err", "oracle_converged", "pass"]


def suite_convergence(args):
    tol = _tolerance(args)
    xs = np.array(parse_range("0:0.25:5"))
    rows = []
    for name, nu, kind, limit in CLOSED_FORMS:
        ref = np.array([closed_form_mainardi(kind, x) for x in xs])
        order = WrightOrder(-nu, 1.0 - nu)
        n_sel = select_contour(order.mu, 1.0, tol).n_nodes
        for n in range(2, n_sel + 1):
            params = balanced_params(n, 1.0, tol)
            got = np.array([trapezoid_sum(order, EvalPoint(1.0, x), params)[0] if x else
                            wright_eval(order, EvalPoint(1.0, 0.0), tol).value for x in xs])
            err = float(np.max(np.abs(got - ref) / np.abs(ref)))
            final = n == n_sel
            rows.append({"case": name, "n_nodes": n, "max_rel_err": err,
                         "pass": (err <= limit) if final else True})
    return rows, ["case", "n_nodes", "max_rel_err", "pass"]


def suite_params(args):
    tol = _tolerance(args)
    rows = []
    prev = None
    for mu_re in parse_range("-6:0.5:40"):
        p = select_contour(mu_re, 1.0, tol)
        ok = True
        if mu_re == 0.5:
            ok = p.n_nodes == math.floor(math.sqrt(2.0 * tol.ell * tol.ell_tol) / math.pi)
        if prev is not None and mu_re >= 2.0:
            ok = ok and p.n_nodes >= prev.n_nodes and p.c <= prev.c
        rows.append({"mu_re": mu_re, "c": p.c, "xi": p.xi, "n_nodes": p.n_nodes,
                     "step": p.step, "gamma_t": p.gamma, "pass": ok})
        prev = p
    return rows, ["mu_re", "c", "xi", "n_nodes", "step", "gamma_t", "pass"]


SUITES = {
    "closed-forms": suite_closed_forms,
    "heatmap": suite_heatmap,
    "convergence": suite_convergence,
    "params": suite_params,
}


def cmd_validate(args) -> int:
    rows, fields = SUITES[args.suite](args)
    _emit(render(rows, fields, args.format), args.out)
    failed = [r for r in rows if not r["pass"]]
    if failed:
        sys.stderr.write(f"{args.suite}: {len(failed)} of {len(rows)} rows above threshold\n")
        for r in failed:
            sys.stderr.write("  " + ", ".join(f"{k}={_fmt(r[k])}" for k in fields) + "\n")
        return EXIT_THRESHOLD
    return EXIT_OK


# -- demo ---------------------------------------------------------------------


def _demo_cauchy(args):
    rows = []
    n = args.n
    for nu in _values(args.nu):
        g = fracpde.GridFunction.sample(lambda x: (np.abs(x) <= 1.0).astype(float),
                                        -args.half_width, args.half_width, n)
        p = None
        if nu > 0.5:
            p = fracpde.GridFunction(g.x_min, g.dx, g.n, np.zeros(n))
        u = fracpde.cauchy_solve(fracpde.CauchyProblem(nu, args.D, g, p), args.t)
        for x, gv, uv in zip(g.x, g.values, u.values):
            rows.append({"nu": nu, "t": args.t, "x": float(x), "g": float(gv), "u": float(uv)})
    return rows, ["nu", "t", "x", "g", "u"]


def _demo_signalling(args):
    rows = []
    xs = _values(args.x) if args.x else [1.0]
    times = _values(args.times)
    for nu in _values(args.nu):
        for x in xs:
            sol = fracpde.signalling_solve(lambda s: np.ones_like(s), nu, args.D, x, times)
            for t, u, ok in zip(sol.t, sol.u, sol.converged):
                rows.append({"nu": nu, "x": x, "t": float(t), "u": float(u), "converged": bool(ok)})
    return rows, ["nu", "x", "t", "u", "converged"]


def _demo_tworod(args):
    rows = []
    base = dict(fracpde.DEMO_RODS)
    for key in base:
        val = getattr(args, key)
        if val is not None:
            base[key] = val
    xs = _values(args.x) if args.x else parse_range("-5:0.1:5")
    for alpha in _values(args.alpha):
        cfg = fracpde.TwoRodConfig(alpha=alpha, **base)
        seen = set()
        for x in xs:
            if x == 0.0:
                x = 0.0  # emit the contact point once, from the rod-1 side
            if x in seen:
                continue
            seen.add(x)
            rows.append({"alpha": alpha, "t": args.t, "x": x,
                         "T": fracpde.tworod_solve(cfg, x, args.t)})
    return rows, ["alpha", "t", "x", "T"]


DEMOS = {
    "cauchy": _demo_cauchy,
    "signalling": _demo_signalling,
    "tworod": _demo_tworod,
}


def cmd_demo(args) -> int:
    if args.nu is None:
        args.nu = ["0.5"]
    rows, fields = DEMOS[args.problem](args)
    _emit(render(rows, fields, args.format), args.out)
    return EXIT_OK


# -- oracle -------------------------------------------------------------------


def cmd_oracle(args) -> int:
    abs_tol = args.tol if args.tol_given else 1e-15
    res = wright_series(args.lam, complex(args.mu, args.mu_im), complex(args.z, args.z_im),
                        abs_tol=abs_tol, max_terms=args.max_terms, precision=args.precision)
    doc = {
        "lambda": args.lam, "mu_re": args.mu, "mu_im": args.mu_im,
        "z_re": args.z, "z_im": args.z_im,
        "re": res.value.real, "im": res.value.imag,
        "terms_used": res.terms_used, "tail_bound": res.tail_bound,
        "max_term": res.max_term, "converged": res.converged,
    }
    _emit(json.dumps(doc) + "\n", args.out)
    if not res.converged:
        sys.stderr.write("oracle: series did not converge within max_terms\n")
        return EXIT_NOCONV
    return EXIT_OK


# -- parser -------------------------------------------------------------------


class _TolAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.tol_given = True


def _add_common(p: argparse.ArgumentParser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=["csv", "json"],
                   default=default if suppress else "csv", help="output format (default csv)")
    p.add_argument("--out", metavar="PATH", default=default, help="write to a file instead of stdout")
    p.add_argument("--tol", metavar="EPS", type=_number, action=_TolAction,
                   default=default if suppress else 1e-15,
                   help="target accuracy (oracle: absolute term tolerance); default 1e-15")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wright2k", description=__doc__.split("\n\n")[0])
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate f_{lambda,mu}(t; x)")
    _add_common(p, suppress=True)
    p.add_argument("--lambda", dest="lam", type=_number, required=True)
    p.add_argument("--mu", "--mu-re", dest="mu", type=_number, required=True)
    p.add_argument("--mu-im", type=_number, default=0.0)
    p.add_argument("--t", type=_number, default=1.0)
    p.add_argument("--x", nargs="+", required=True,
                   help="values, comma lists or start:step:stop ranges")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("validate", help="run a validation suite")
    _add_common(p, suppress=True)
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--lambdas", type=parse_range, default=HEATMAP_LAMBDAS)
    p.add_argument("--mu-re", type=parse_range, default=HEATMAP_MU_RE)
    p.add_argument("--mu-im", type=parse_range, default=HEATMAP_MU_IM)
    p.add_argument("--points", type=int, default=21, help="x points on [-5, 0] (heatmap)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("demo", help="emit solution data for a model problem")
    _add_common(p, suppress=True)
    p.add_argument("--problem", choices=sorted(DEMOS), required=True)
    p.add_argument("--nu", nargs="+", help="order(s) nu (cauchy, signalling); default 0.5")
    p.add_argument("--alpha", nargs="+", default=["0.5", "1", "1.5"], help="orders (tworod)")
    p.add_argument("--t", type=_number, default=1.0)
    p.add_argument("--times", nargs="+", default=["0.1:0.1:2"], help="times (signalling)")
    p.add_argument("--x", nargs="+", help="positions (signalling, tworod)")
    p.add_argument("--D", type=_number, default=1.0)
    p.add_argument("--n", type=int, default=256, help="grid size (cauchy)")
    p.add_argument("--half-width", type=_number, default=5.0, help="grid is [-L, L) (cauchy)")
    for key in fracpde.DEMO_RODS:
        p.add_argument(f"--{key}", type=_number, default=None)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("oracle", help="sum the power series in double-double")
    _add_common(p, suppress=True)
    p.add_argument("--lambda", dest="lam", type=_number, required=True)
    p.add_argument("--mu", "--mu-re", dest="mu", type=_number, required=True)
    p.add_argument("--mu-im", type=_number, default=0.0)
    p.add_argument("--z", "--z-re", dest="z", type=_number, required=True)
    p.add_argument("--z-im", type=_number, default=0.0)
    p.add_argument("--max-terms", type=int, default=1000)
    p.add_argument("--precision", choices=["dd", "double"], default="dd")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    if not hasattr(args, "tol_given"):
        args.tol_given = False
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        sys.stderr.write(f"wright2k: error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, WrightError) as exc:
        sys.stderr.write(f"wright2k: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
