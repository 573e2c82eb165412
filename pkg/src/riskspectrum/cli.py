"""Command-line front end.

Exit codes: 0 success, 2 numeric tolerance failure, 3 input error,
4 domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dist as dist_mod
from .dist import DiscreteDist, JointDiscreteDist, parse_alpha, read_dist
from .errors import DomainError, InputError, NumericOverflow, ToleranceNotReached
from .lower_quantile import cvar
from .quantile_bounds import dual_check, quantile_bound, quantile_q0
from .risk_measures import (LipschitzFn, build_suite, coherence_harness, gini_mean_diff,
                            lorenz, mean_risk)
from .tail_bounds import DEFAULT_TOL, tail_bound

EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_DOMAIN = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, "%s: error: %s\n" % (self.prog, message))


def _num(x: float, digits: int = 17) -> str:
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".%dg" % digits)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return _num(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.generic):
        return _jsonable(v.item())
    return v


def _threads() -> int:
    raw = os.environ.get("RISK_SPECTRUM_THREADS")
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError("RISK_SPECTRUM_THREADS must be an integer") from None


def _load_single(path: str):
    d = read_dist(path)
    if isinstance(d, JointDiscreteDist):
        raise InputError("this command needs a single distribution, not a joint one")
    return d


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# sweeps

def parse_sweep(token: str) -> tuple[str, list[float]]:
    """VAR:START:STOP:COUNT[:log] -> (VAR, grid)."""
    parts = token.split(":")
    if len(parts) not in (4, 5) or parts[0] not in ("alpha", "p", "x"):
        raise InputError("sweep must look like VAR:START:STOP:COUNT[:log] with VAR in alpha, p, x")
    var = parts[0]
    try:
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise InputError("bad numbers in sweep %r" % token) from None
    if count < 1:
        raise InputError("sweep count must be positive")
    scale = parts[4] if len(parts) == 5 else "linear"
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise InputError("log sweeps need positive endpoints")
        grid = np.geomspace(start, stop, count)
    elif scale == "linear":
        grid = np.linspace(start, stop, count)
    else:
        raise InputError("sweep scale must be linear or log")
    return var, _check_grid(var, grid.tolist())


def parse_grid(token: str) -> tuple[str, list[float]]:
    """VAR=v1,v2,... with alpha entries allowed to be 'inf'."""
    var, _, rest = token.partition("=")
    if var not in ("alpha", "p", "x") or not rest:
        raise InputError("grid must look like VAR=v1,v2,... with VAR in alpha, p, x")
    try:
        values = [parse_alpha(v) if var == "alpha" else float(v) for v in rest.split(",")]
    except ValueError:
        raise InputError("bad grid entry in %r" % token) from None
    return var, _check_grid(var, values)


def _check_grid(var: str, grid: list[float]) -> list[float]:
    if not grid:
        raise InputError("empty grid")
    if var == "p" and not all(0 < v < 1 for v in grid):
        raise InputError("p grid must lie inside (0, 1)")
    if var == "alpha":
        grid = [dist_mod.check_alpha(v) for v in grid]
    return grid


def _row(d, mode: str, alpha: float, p: float | None, x: float | None, tol: float) -> dict:
    if mode == "p":
        res = tail_bound(d, x, alpha, tol)
        return {"alpha": alpha, "x": x, "value": res.value,
                "value_error_bound": res.value_error_bound, "minimizers": res.minimizers}
    res = quantile_bound(d, p, alpha, tol)
    residual = math.nan
    if alpha > 0 and p > d.p_star:
        residual = dual_check(d, p, alpha, tol)
    return {"alpha": alpha, "p": p, "value": res.value,
            "value_error_bound": res.value_error_bound, "minimizers": res.minimizers,
            "dual_residual": residual}


def spectrum_rows(d, var: str, grid: list[float], alpha: float | None, p: float | None,
                  x: float | None, tol: float) -> list[dict]:
    mode = "p" if (var == "x" or (x is not None and var != "p")) else "q"
    if mode == "q" and var != "p" and p is None:
        raise InputError("a quantile sweep needs --p")
    if var != "alpha" and alpha is None:
        raise InputError("this sweep needs --alpha")

    def one(v):
        a = v if var == "alpha" else alpha
        return _row(d, mode, a, v if var == "p" else p, v if var == "x" else x, tol)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(one, grid))


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(rows), indent=2) + "\n"
    cols = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        out = []
        for c in cols:
            v = r[c]
            if isinstance(v, list):
                out.append(";".join(_num(float(m)) for m in v))
            elif isinstance(v, float) and math.isnan(v):
                out.append("")
            else:
                out.append(_num(float(v)))
        writer.writerow(out)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands

def cmd_pbound(args) -> int:
    d = _load_single(args.dist)
    res = tail_bound(d, args.x, args.alpha, args.tol)
    if args.format == "text":
        lines = ["value        %s" % _num(res.value, 10),
                 "error bound  %s" % _num(res.value_error_bound, 3),
                 "minimizers   %s" % ", ".join(_num(m, 10) for m in res.minimizers),
                 "attained     %s" % res.attained]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        row = {"alpha": args.alpha, "x": args.x, **res.to_json()}
        _emit(format_rows([row], args.format), args.out)
    return EXIT_OK


def cmd_qbound(args) -> int:
    d = _load_single(args.dist)
    res = quantile_bound(d, args.p, args.alpha, args.tol)
    extra = {}
    if args.alpha > 0 and args.p > d.p_star:
        extra["dual_residual"] = dual_check(d, args.p, args.alpha, args.tol)
    if args.alpha == 1:
        q0 = quantile_q0(d, args.p)
        extra["q0"] = q0
        extra["excess"] = cvar(d, args.p) - q0
    if args.format == "text":
        lines = ["value          %s" % _num(res.value, 10),
                 "error bound    %s" % _num(res.value_error_bound, 3),
                 "minimizers     %s" % ", ".join(_num(m, 10) for m in res.minimizers),
                 "attained       %s" % res.attained]
        if "dual_residual" in extra:
            lines.append("dual residual  %s" % _num(extra["dual_residual"], 3))
        if "q0" in extra:
            lines.append("quantile Q0    %s" % _num(extra["q0"], 10))
            lines.append("excess term    %s" % _num(extra["excess"], 10))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        row = {"alpha": args.alpha, "p": args.p, **res.to_json(), **extra}
        _emit(format_rows([row], args.format), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    d = _load_single(args.dist)
    if (args.sweep is None) == (args.grid is None):
        raise InputError("give exactly one of --sweep and --grid")
    var, grid = parse_sweep(args.sweep) if args.sweep else parse_grid(args.grid)
    rows = spectrum_rows(d, var, grid, args.alpha, args.p, args.x, args.tol)
    fmt = "csv" if args.format == "text" else args.format
    _emit(format_rows(rows, fmt), args.out)
    return EXIT_OK


def _risk_from_args(args):
    name = args.risk
    if name == "cvar":
        return lambda d: cvar(d, args.p)
    if name == "q0":
        return lambda d: quantile_q0(d, args.p)
    if name == "qalpha":
        return lambda d: quantile_bound(d, args.p, args.alpha, args.tol).value
    if name == "mean_risk":
        return lambda d: mean_risk(d, LipschitzFn.linear(args.kappa))
    raise InputError("unknown risk %r" % name)


def cmd_check(args) -> int:
    if args.risk in ("cvar", "q0", "qalpha") and args.p is None:
        raise InputError("--risk %s needs --p" % args.risk)
    suite = build_suite(np.random.default_rng(args.seed), args.cases)
    for path in args.dist or []:
        d = read_dist(path)
        if isinstance(d, JointDiscreteDist):
            suite.joints.append(d)
        elif isinstance(d, DiscreteDist):
            suite.singles.append(d)
        else:
            raise InputError("the harness works on discrete distributions only")
    report = coherence_harness(_risk_from_args(args), suite, args.tol)
    _emit(json.dumps(_jsonable(report), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_inequality(args) -> int:
    d = _load_single(args.dist)
    if not isinstance(d, DiscreteDist):
        raise InputError("inequality measures need a discrete distribution")
    H = LipschitzFn.linear(args.kappa)
    q = quantile_bound(d, args.p, args.alpha, args.tol).value
    out = {"p": args.p, "alpha": args.alpha, "kappa": args.kappa,
           "mean": d.mean, "gini_mean_difference": gini_mean_diff(d, H),
           "mean_risk": mean_risk(d, H),
           "lorenz": lorenz(d, args.p) if d.lower >= 0 else math.nan,
           "quantile_bound": q,
           "top_share_multiplier": cvar(d, args.p) / d.mean if d.mean != 0 else math.nan}
    if args.format == "text":
        width = max(len(k) for k in out)
        _emit("".join("%-*s  %s\n" % (width, k, _num(float(v), 10)) for k, v in out.items()),
              args.out)
    else:
        _emit(format_rows([out], args.format), args.out)
    return EXIT_OK


def _alpha_arg(token):
    try:
        return parse_alpha(token)
    except (InputError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="risk-spectrum",
                     description="Tail-probability and quantile bounds across the alpha spectrum.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, dist_required=True, default_format="text"):
        sp.add_argument("--dist", required=dist_required, help="distribution JSON file")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--format", choices=("text", "csv", "json"), default=default_format)

    sp = sub.add_parser("pbound", help="tail-probability bound at a threshold")
    common(sp)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--alpha", type=_alpha_arg, required=True)
    sp.set_defaults(func=cmd_pbound)

    sp = sub.add_parser("qbound", help="quantile bound at a level p")
    common(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--alpha", type=_alpha_arg, required=True)
    sp.set_defaults(func=cmd_qbound)

    sp = sub.add_parser("spectrum", help="table of bounds over a grid of alpha, p or x")
    common(sp, default_format="csv")
    sp.add_argument("--sweep", help="VAR:START:STOP:COUNT[:log]")
    sp.add_argument("--grid", help="VAR=v1,v2,... (alpha entries may be 'inf')")
    sp.add_argument("--alpha", type=_alpha_arg)
    sp.add_argument("--p", type=float)
    sp.add_argument("--x", type=float)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("check", help="coherence report for a risk functional")
    sp.add_argument("--dist", action="append", help="extra cases (repeatable)")
    sp.add_argument("--risk", choices=("cvar", "q0", "qalpha", "mean_risk"), default="cvar")
    sp.add_argument("--p", type=float)
    sp.add_argument("--alpha", type=_alpha_arg, default=1.0)
    sp.add_argument("--kappa", type=float, default=0.5)
    sp.add_argument("--cases", type=int, default=50)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("inequality", help="Gini, mean-risk, Lorenz and quantile-bound summary")
    common(sp)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--alpha", type=_alpha_arg, default=1.0)
    sp.add_argument("--kappa", type=float, default=0.5)
    sp.set_defaults(func=cmd_inequality)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except ToleranceNotReached as exc:
        print("tolerance not reached: %s" % exc, file=sys.stderr)
        return EXIT_TOL
    except NumericOverflow as exc:
        print("numeric overflow: %s" % exc, file=sys.stderr)
        return EXIT_TOL
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print("domain error: %s" % exc, file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
