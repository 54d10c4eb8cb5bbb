"""Command-line entry point: ``bnovikov {index,region,wave,spectrum,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error,
3 Newton non-convergence, 4 eigensolver failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings

import numpy as np

from . import verification
from .errors import (
    BifurcationInvalid,
    EigensolverFailure,
    NoConvergence,
    NonPositiveParameter,
    TruncationTooSmall,
    ValidityViolated,
)
from .hill import DEFAULT_N as HILL_N, xi_sweep
from .modulation import classify, g_index, lemma52_case, verdict_from_g
from .params import validate_params
from .wave import check_validity, newton_refine

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NEWTON, EXIT_EIG = 0, 1, 2, 3, 4

log = logging.getLogger("bnovikov")


class UsageError(Exception):
    pass


# -- deterministic output ---------------------------------------------------


def fmt(x):
    """17 significant digits, '.' separator, independent of locale."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def _json_value(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if not len(obj):
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_json_value(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _json_value(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return json.dumps(str(float(obj)))
    return fmt(obj)


def dumps_json(obj):
    """JSON text with every float printed as '%.17g'."""
    return _json_value(obj, 2, 0) + "\n"


def csv_text(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(v if isinstance(v, str) else fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from exc


# -- argument handling -------------------------------------------------------


def _params(args):
    return validate_params(args.b, args.k, args.d)


def _linspace(lo, hi, n, name):
    if n < 1:
        raise UsageError(f"--n{name} must be at least 1 (got {n})")
    if not lo <= hi or (n > 1 and lo == hi):
        raise UsageError(f"empty or reversed {name} range [{lo}, {hi}]")
    return np.linspace(lo, hi, n)


def cmd_index(args):
    params = _params(args)
    v = classify(params)
    case = lemma52_case(params.k, params.b)
    if args.format == "json":
        emit(dumps_json({"schema": 1, "b": params.b, "k": params.k, "g": v.g_value,
                         "k_squared": v.k_squared, "verdict": v.verdict.value, "case": case}), args.out)
    else:
        emit(csv_text(["b", "k", "g", "k_squared", "verdict", "case"],
                      [[params.b, params.k, v.g_value, v.k_squared, v.verdict.value, case]]), args.out)
    return EXIT_OK


def region_rows(ks, bs):
    """(k, b, g, verdict) on the tensor grid, k-major.

    b = 0 is admitted here: g is a polynomial and is classified directly.
    """
    rows = []
    for k in ks:
        for b in bs:
            g = g_index(k, b)
            rows.append((float(k), float(b), g, verdict_from_g(g, k, b).value))
    return rows


def cmd_region(args):
    ks = _linspace(args.k_min, args.k_max, args.nk, "k")
    bs = _linspace(args.b_min, args.b_max, args.nb, "b")
    if ks[0] <= 0 or bs[0] < 0:
        raise UsageError("region scan needs k > 0 and b >= 0")
    rows = region_rows(ks, bs)
    if args.format == "json":
        emit(dumps_json({"schema": 1, "rows": [{"k": r[0], "b": r[1], "g": r[2], "verdict": r[3]} for r in rows]}), args.out)
    else:
        emit(csv_text(["k", "b", "g", "verdict"], rows), args.out)
    return EXIT_OK


def cmd_wave(args):
    params = _params(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            wave = newton_refine(params, args.a, args.N, args.tol)
        finally:
            for w in caught:
                print(f"warning: {w.category.__name__}: {w.message}", file=sys.stderr)
    speed_margin, ellipticity_margin = check_validity(wave)
    data = wave.to_dict()
    data["diagnostics"] = {
        "residual": wave.residual_norm,
        "min_c_minus_w2": speed_margin,
        "min_w_minus_k2_wzz": ellipticity_margin,
        "iterations": len(wave.history) - 1,
        "history": wave.history,
    }
    emit(dumps_json(data), args.out)
    return EXIT_OK


def cmd_spectrum(args):
    params = _params(args)
    if args.n_xi < 1 or args.xi_min > args.xi_max or abs(args.xi_max) > 0.5 or abs(args.xi_min) > 0.5:
        raise UsageError("xi range must satisfy -1/2 <= xi-min <= xi-max <= 1/2 with n-xi >= 1")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        wave = newton_refine(params, args.a, min(32, args.N), args.tol)
    xis = np.linspace(args.xi_min, args.xi_max, args.n_xi)
    samples = xi_sweep(wave, xis, args.N)
    unstable = verification.empirical_unstable(samples)
    if args.format == "json":
        emit(dumps_json({"schema": 1, "b": params.b, "k": params.k, "d": params.d, "a": args.a, "N": args.N,
                         "samples": [s.to_dict() for s in samples],
                         "verdict": "Unstable" if unstable else "Stable"}), args.out)
    else:
        header = ["xi", "max_real_part"] + [f"crit{i}_{part}" for i in (1, 2, 3) for part in ("re", "im")]
        rows = []
        for s in samples:
            row = [s.xi, s.max_real_part]
            for z in s.critical_triple:
                row += [z.real, z.imag]
            rows.append(row)
        emit(csv_text(header, rows), args.out)
    print(f"empirical modulational verdict: {'Unstable' if unstable else 'Stable'}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    params = _params(args)
    checks = verification.run_all(params)
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("failed: " + "; ".join(failed))
        return EXIT_VERIFY
    print("all checks passed")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="bnovikov", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_d=True):
        p.add_argument("--b", type=float, required=True)
        p.add_argument("--k", type=float, required=True)
        if need_d:
            p.add_argument("--d", type=float, default=1.0)
        p.add_argument("--out", default=None)

    p = sub.add_parser("index", help="instability index g(k, b) and verdict")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("region", help="grid scan of the sign of g")
    p.add_argument("--k-min", type=float, default=0.5)
    p.add_argument("--k-max", type=float, default=6.0)
    p.add_argument("--b-min", type=float, default=0.0)
    p.add_argument("--b-max", type=float, default=12.0)
    p.add_argument("--nk", type=int, default=200)
    p.add_argument("--nb", type=int, default=200)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("wave", help="Newton-refined periodic wave as JSON")
    common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--N", type=int, default=32)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_wave)

    p = sub.add_parser("spectrum", help="Bloch spectrum sweep in xi")
    common(p)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=0.1)
    p.add_argument("--n-xi", type=int, default=21)
    p.add_argument("--N", type=int, default=HILL_N)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run every cross-check for one parameter triple")
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, NonPositiveParameter, BifurcationInvalid, TruncationTooSmall, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoConvergence, ValidityViolated) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        for i, r in enumerate(getattr(exc, "history", [])):
            print(f"  iter {i}: residual {r:.3e}", file=sys.stderr)
        return EXIT_NEWTON
    except EigensolverFailure as exc:
        print(f"error: EigensolverFailure: {exc}", file=sys.stderr)
        return EXIT_EIG


if __name__ == "__main__":
    sys.exit(main())
