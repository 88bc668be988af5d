"""Command-line front end: eval, verify, sweep, list.

Exit codes: 0 pass, 1 fail, 2 usage, 3 domain error, 4 saturation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from fractions import Fraction
from typing import Callable, Sequence

from ._backend import backend, precision
from .errors import DomainError, SaturationError
from .identities import IdentityReport, catalog, get, parse_real, sweep, verify
from .mellin import (MellinIntegrand, csch2_series_integrand, example4_integrand,
                     log_theta_quotient_integrand, mellin_transform)
from .numtheory import gcd_sum
from .seriescore import TruncationPolicy, lambert_sum, record_depths
from .specialfn import (ThetaArg, eta_product, hurwitz_zeta, log_theta_quotient_d2, periodic_L,
                        rrcf, theta2, theta3, theta4, zeta)
from .specs import parse_char, parse_coeff

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_SATURATED = 0, 1, 2, 3, 4
REPORT_FIELDS = ("id", "params", "lhs", "rhs", "abs_err", "rel_err", "tol",
                 "depth_series", "depth_product", "depth_quadrature", "status", "notes")


class UsageError(Exception):
    pass


# -- argument parsing ----------------------------------------------------------------

def _kv(items: Sequence[str]) -> dict[str, str]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _frange(text: str) -> list[float]:
    """'a:b:step' inclusive of b (to rounding)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be start:stop:step, got {text!r}")
    a, b, h = (parse_real(p) for p in parts)
    if not h > 0 or b < a:
        raise UsageError(f"bad range {text!r}")
    n = int(math.floor((b - a) / h + 1e-9))
    return [round(a + i * h, 12) for i in range(n + 1)]


def parse_grid(identity_id: str, tokens: Sequence[str]) -> dict[str, list]:
    """Grid from tokens like ``x=0.5:2:0.5,s=2,4`` or ``s=2,4 x=0.5,1,2``.

    Numeric axes take comma lists and start:stop:step ranges.  Sequence-valued
    axes (coefficient and periodic specs, which contain commas) take a single
    spec or alternatives separated by ``|``.
    """
    spec = get(identity_id)
    kinds = {p.name: p.kind for p in spec.params}
    raw: dict[str, list[str]] = {}
    key = None
    for token in ",".join(t for t in tokens if t.strip()).split(","):
        token = token.strip()
        if not token:
            continue
        k, sep, v = token.partition("=")
        if sep and (key is None or kinds.get(key) in ("real", "int") or k in kinds):
            key = k.strip()
            if key not in kinds:
                raise UsageError(f"{spec.id} has no parameter {key!r}")
            if key in raw:
                raise UsageError(f"parameter {key!r} given twice")
            raw[key] = [v.strip()]
        elif key is None:
            raise UsageError(f"grid must start with key=values, got {token!r}")
        else:
            raw[key].append(token)
    grid: dict[str, list] = {}
    for k, vals in raw.items():
        if kinds[k] in ("real", "int"):
            axis: list = []
            for v in vals:
                axis.extend(_frange(v) if ":" in v else [v])
            grid[k] = axis
        else:
            grid[k] = ",".join(vals).split("|")
    return grid


def _random_poly(deg: int, rng: random.Random) -> str:
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(deg)]
    if all(c == 0 for c in coeffs):
        coeffs[0] = Fraction(1)
    return "poly:" + ",".join(str(c) for c in coeffs)


def _expand_random(params: dict[str, str], rng: random.Random) -> dict[str, str]:
    """Replace ``random:deg`` coefficient values by a seeded random polynomial."""
    out = {}
    for k, v in params.items():
        if isinstance(v, str) and v.startswith("random:"):
            try:
                deg = int(v.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"random:deg needs an integer degree, got {v!r}") from None
            if not 1 <= deg <= 50:
                raise UsageError("random polynomial degree must be in 1..50")
            v = _random_poly(deg, rng)
        out[k] = v
    return out


# -- eval ------------------------------------------------------------------------------

def _req(args: dict, *names: str) -> list[str]:
    missing = [n for n in names if n not in args]
    if missing:
        raise UsageError(f"missing argument(s): {', '.join(missing)}")
    return [args[n] for n in names]


def _theta_z(text: str) -> ThetaArg:
    t = text.strip().replace(" ", "")
    if t.endswith(("i", "j")):
        body = t[:-1]
        if body.startswith("*"):
            body = body[1:]
        body = body.rstrip("*") or "1"
        return ThetaArg(imag=parse_real(body))
    return ThetaArg(real=parse_real(t))


def _mellin_integrand(text: str) -> MellinIntegrand:
    head, _, rest = text.partition(":")
    head = head.strip().lower()
    if head == "csch2":
        return csch2_series_integrand(parse_char(rest or "one"))
    if head == "theta_quotient":
        try:
            p, a, b = (int(v) for v in rest.split(","))
        except ValueError:
            raise UsageError("theta_quotient:p,a,b needs three integers") from None
        return log_theta_quotient_integrand(p, a, b)
    if head == "example4":
        return example4_integrand()
    if head == "exp":
        return MellinIntegrand(lambda t: backend().exp(-t), 0.0, 1.0, description="exp(-t)")
    if head == "gauss":
        return MellinIntegrand(lambda t: backend().exp(-t * t), 0.0, 1.0, description="exp(-t^2)")
    raise UsageError(f"unknown integrand {text!r}; use csch2:X, theta_quotient:p,a,b, "
                     "example4, exp or gauss")


def _ev_theta4(a, pol):
    z, q = _req(a, "z", "q")
    return theta4(_theta_z(z), parse_real(q)), pol.tol


def _ev_mellin(a, pol):
    f, s = _req(a, "f", "s")
    tol = parse_real(a.get("quad_tol", "1e-11"))
    res = mellin_transform(_mellin_integrand(f), parse_real(s), tol, full_output=True)
    return res.value, res.error


def _ev_lambert(a, pol):
    c, x = _req(a, "c", "x")
    sign = int(parse_real(a.get("sign", "-1")))
    return lambert_sum(parse_coeff(c), sign, parse_real(x), pol), pol.tol


def _ev_gcd(a, pol):
    f, n = _req(a, "f", "n")
    n_int = int(parse_real(n))
    if n_int < 1:
        raise DomainError("n must be >= 1")
    return gcd_sum(parse_coeff(f), n_int), 0.0


def _ev_hurwitz(a, pol):
    s = _req(a, "s")[0]
    return hurwitz_zeta(parse_real(s), parse_real(a.get("a", "1"))), None


EVALUATORS: dict[str, Callable] = {
    "theta2": lambda a, pol: (theta2(parse_real(_req(a, "q")[0])), pol.tol),
    "theta3": lambda a, pol: (theta3(parse_real(_req(a, "q")[0])), pol.tol),
    "theta4": _ev_theta4,
    "eta_product": lambda a, pol: (eta_product(parse_real(_req(a, "q")[0]), pol), pol.tol),
    "rrcf": lambda a, pol: (rrcf(parse_real(_req(a, "q")[0]), int(parse_real(a.get("depth", "40")))),
                            None),
    "zeta": lambda a, pol: (zeta(parse_real(_req(a, "s")[0])), None),
    "hurwitz_zeta": _ev_hurwitz,
    "periodic_L": lambda a, pol: (periodic_L(parse_char(_req(a, "X")[0]),
                                             parse_real(_req(a, "s")[0])), None),
    "lambert_sum": _ev_lambert,
    "gcd_sum": _ev_gcd,
    "mellin": _ev_mellin,
    "log_theta_quotient_d2": lambda a, pol: (log_theta_quotient_d2(
        *(int(parse_real(v)) for v in _req(a, "p", "a", "b")), parse_real(_req(a, "x")[0])), None),
}


# -- output ---------------------------------------------------------------------------------

def _num_out(v):
    if v is None:
        return None
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, int):
        return v
    f = float(v)
    return f if math.isfinite(f) else None


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _csv_rows(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for d in rows:
        w.writerow([
            d["id"], ";".join(f"{k}={v}" for k, v in d["params"].items()),
            d["lhs"], d["rhs"], d["abs_err"], d["rel_err"], d["tol"],
            d["depths"]["series"], d["depths"]["product"], d["depths"]["quadrature"],
            d["status"], " | ".join(d["notes"]),
        ])
    return buf.getvalue()


def _fmt(v) -> str:
    return "-" if v is None else (f"{v:.17g}" if isinstance(v, float) else str(v))


def _text_report(d: dict) -> str:
    params = " ".join(f"{k}={v}" for k, v in d["params"].items())
    lines = [f"{d['id']} [{params}]  {d['status'].upper()}",
             f"  lhs     = {_fmt(d['lhs'])}",
             f"  rhs     = {_fmt(d['rhs'])}",
             f"  abs_err = {_fmt(d['abs_err'])}   rel_err = {_fmt(d['rel_err'])}   tol = {d['tol']:g}",
             "  depths  = " + ", ".join(f"{k} {v}" for k, v in d["depths"].items())]
    lines += [f"  note: {n}" for n in d["notes"]]
    return "\n".join(lines)


def _summary(reports: list[IdentityReport]) -> dict:
    counts = {s: sum(r.status == s for r in reports) for s in ("pass", "fail", "saturated")}
    return {"total": len(reports), **counts}


def _exit_for(statuses: list[str]) -> int:
    if "fail" in statuses:
        return EXIT_FAIL
    if "saturated" in statuses:
        return EXIT_SATURATED
    return EXIT_PASS


# -- commands -----------------------------------------------------------------------------------

def cmd_eval(ns, out) -> int:
    if ns.name not in EVALUATORS:
        raise UsageError(f"unknown quantity {ns.name!r}; choose from {', '.join(EVALUATORS)}")
    args = _kv(ns.args)
    pol = TruncationPolicy.machine(ns.max_terms)
    with record_depths() as depths:
        value, bound = EVALUATORS[ns.name](args, pol)
    rec = {"name": ns.name, "args": args, "value": _num_out(value),
           "error_bound": _num_out(bound), "precision": backend().name,
           "depths": {k: int(depths.get(k, 0)) for k in ("series", "product", "quadrature")}}
    if ns.output == "json":
        out.write(_json(rec) + "\n")
    elif ns.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["name", "args", "value", "error_bound", "precision", "depth_series",
                    "depth_product", "depth_quadrature"])
        w.writerow([rec["name"], ";".join(f"{k}={v}" for k, v in args.items()), rec["value"],
                    rec["error_bound"], rec["precision"], *rec["depths"].values()])
    else:
        digits = 17 if backend().name == "standard" else 50
        shown = str(value) if backend().name == "high" else f"{float(value):.{digits}g}"
        out.write(f"{ns.name} = {shown}\n")
        out.write(f"  error bound: {_fmt(rec['error_bound'])}\n")
        out.write("  depths: " + ", ".join(f"{k} {v}" for k, v in rec["depths"].items()) + "\n")
    return EXIT_PASS


def cmd_verify(ns, out) -> int:
    spec = get(ns.id)
    params = _expand_random(_kv(ns.params), random.Random(ns.seed))
    report = verify(spec.id, params, ns.tol, ns.max_terms)
    d = report.to_dict()
    if ns.output == "json":
        out.write(_json(d) + "\n")
    elif ns.output == "csv":
        out.write(_csv_rows([d]))
    else:
        out.write(_text_report(d) + "\n")
    return _exit_for([report.status])


def cmd_sweep(ns, out) -> int:
    spec = get(ns.id)
    grid = parse_grid(spec.id, ns.grid)
    rng = random.Random(ns.seed)
    grid = {k: [_expand_random({k: v}, rng)[k] for v in vals] for k, vals in grid.items()}
    reports = sweep(spec.id, grid, ns.tol, ns.max_terms)
    rows = [r.to_dict() for r in reports]
    summary = _summary(reports)
    if ns.output == "json":
        out.write(_json({"id": spec.id, "reports": rows, "summary": summary}) + "\n")
    else:
        if ns.output == "csv":
            out.write(_csv_rows(rows))
        else:
            for d in rows:
                out.write(_text_report(d) + "\n")
        out.write(f"# {summary['pass']}/{summary['total']} pass, {summary['fail']} fail, "
                  f"{summary['saturated']} saturated\n")
    return _exit_for([r.status for r in reports])


def cmd_list(ns, out) -> int:
    rows = [{"id": s.id, "title": s.title, "params": s.param_names(),
             "error_kind": s.error_kind, "default_tol": s.default_tol, "reference": s.reference}
            for s in catalog()]
    if ns.output == "json":
        out.write(_json(rows) + "\n")
    elif ns.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["id", "title", "params", "error_kind", "default_tol", "reference"])
        for r in rows:
            w.writerow([r["id"], r["title"], ";".join(r["params"]), r["error_kind"],
                        r["default_tol"], r["reference"]])
    else:
        for r in rows:
            out.write(f"{r['id']:<14} {r['error_kind']} {r['default_tol']:<7g} "
                      f"({', '.join(r['params'])})  {r['reference']}\n")
    return EXIT_PASS


# -- entry point ---------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_float(text: str) -> float:
    v = parse_real(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("must be an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=1e-8,
                        help="pass/fail tolerance (default 1e-8)")
    common.add_argument("--max-terms", type=_positive_int, default=1_000_000,
                        help="hard cap on series depth (default 1e6)")
    common.add_argument("--precision", choices=("standard", "high"), default=None,
                        help="numeric backend (default: $DIVISUM_PRECISION or standard)")
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for random:deg polynomial parameters")
    p = _Parser(prog="divisum", description="Divisor-sum, Lambert-series and theta-function "
                "evaluators with identity verification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    e = sub.add_parser("eval", parents=[common], help="evaluate a named quantity")
    e.add_argument("name", help=", ".join(EVALUATORS))
    e.add_argument("args", nargs="*", metavar="key=value")
    v = sub.add_parser("verify", parents=[common], help="verify one identity")
    v.add_argument("id")
    v.add_argument("params", nargs="*", metavar="key=value")
    s = sub.add_parser("sweep", parents=[common], help="verify an identity over a grid")
    s.add_argument("id")
    s.add_argument("grid", nargs="*", metavar="grid",
                   help='e.g. "x=0.5:2:0.5,s=2,4" or s=2,4 x=0.5,1,2')
    sub.add_parser("list", parents=[common], help="list the identity catalog")
    return p


_COMMANDS = {"eval": cmd_eval, "verify": cmd_verify, "sweep": cmd_sweep, "list": cmd_list}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if ns.precision:
            with precision(ns.precision):
                return _COMMANDS[ns.command](ns, out)
        return _COMMANDS[ns.command](ns, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except KeyError as exc:
        err.write(f"usage error: {exc.args[0] if exc.args else exc}\n")
        return EXIT_USAGE
    except SaturationError as exc:
        err.write(f"saturated: {exc}\n")
        return EXIT_SATURATED
    except (DomainError, ValueError, ZeroDivisionError, OverflowError) as exc:
        err.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN


def main_entry() -> None:
    sys.exit(main())
