"""Command-line front end.

Every subcommand writes one table, as CSV (schema comment, header, rows)
or JSON (``{"schema", "config", "rows"}``).  Floats carry 17 significant
digits so files round-trip exactly; non-finite values become ``inf``/``nan``
in CSV and ``null`` in JSON.

Exit status: 0 on success, 2 for bad configuration, 1 when a numerical
routine fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import analysis, asymptotics, densities, fourier
from .oscillator import OscillatorParams, energy_match
from .quadrature import ConvergenceError, QuadSpec
from .special import scaled_laguerre

SCHEMA = "corrlimit-schema v1"
SUBCOMMANDS = ("qpd", "cpd", "fourier", "asymptotic", "corrections", "moments", "sweep")


class ConfigError(ValueError):
    pass


def _int_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("levels must be non-negative integers")
    return vals


def _float_list(text):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_int_list, default=[0], help="quantum number(s), comma separated")
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--min", dest="vmin", type=float, default=None, help="grid start")
    common.add_argument("--max", dest="vmax", type=float, default=None, help="grid end")
    common.add_argument("--points", type=int, default=None, help="grid size")
    common.add_argument("--space", choices=("position", "momentum"), default="position")
    common.add_argument("--x-ratio", type=_float_list, default=[0.3],
                        help="x/x0 (or p/p0) values inside (-1, 1)")
    common.add_argument("--kmax", type=int, default=1, choices=(0, 1))
    common.add_argument("--alpha-max", type=float, default=QuadSpec.alpha_max)
    common.add_argument("--rtol", type=float, default=QuadSpec.rtol)
    common.add_argument("--window", type=float, default=None,
                        help="coarse-graining width as a fraction of the turning point")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="corrlimit",
        description="Quantum and classical oscillator densities, Fourier coefficients "
                    "and hbar/S corrections.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    helps = {
        "qpd": "quantum density |psi_n|**2 on a grid",
        "cpd": "classical arcsine density on a grid",
        "fourier": "quantum and classical Fourier coefficients",
        "asymptotic": "exact F(u**2) against the Bessel leading term and one iteration",
        "corrections": "classical density plus the first hbar/S correction",
        "moments": "second moments and energy, quantum vs classical",
        "sweep": "convergence diagnostics over several n with power-law fits",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _params(args):
    try:
        return OscillatorParams(args.mass, args.omega, args.hbar)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _quad(args):
    try:
        return QuadSpec(alpha_max=args.alpha_max, rtol=args.rtol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _grid(args, default_lo, default_hi, default_points):
    lo = default_lo if args.vmin is None else args.vmin
    hi = default_hi if args.vmax is None else args.vmax
    points = default_points if args.points is None else args.points
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ConfigError(f"grid needs min < max, got [{lo}, {hi}]")
    if points < 2:
        raise ConfigError("grid needs at least two points")
    return np.linspace(lo, hi, points)


def _profile_rows(args, kind):
    params = _params(args)
    rows = []
    var = "x" if args.space == "position" else "p"
    for n in args.n:
        match = energy_match(params, n)
        if args.vmin is None and args.vmax is None:
            full = densities.default_grid(params, match, args.space)
            lo, hi = full[0], full[-1]
        else:
            amp = match.x0 if args.space == "position" else match.p0
            lo, hi = -1.2 * amp, 1.2 * amp
        grid = _grid(args, lo, hi, densities.DEFAULT_POINTS)
        if kind == "quantum":
            fn = densities.qpd_position if args.space == "position" else densities.qpd_momentum
            vals = fn(params, n, grid)
        else:
            amp = match.x0 if args.space == "position" else match.p0
            on_edge = np.abs(grid) == amp
            safe = np.where(on_edge, 0.0, grid)
            fn = densities.cpd_position if args.space == "position" else densities.cpd_momentum
            vals = np.where(on_edge, np.inf, fn(match, safe))
        rows += [{"n": n, var: v, "density": d} for v, d in zip(grid, np.atleast_1d(vals))]
    return rows, {}


def _fourier_rows(args):
    params = _params(args)
    rows = []
    var = "p" if args.space == "position" else "x"
    space = "position_conjugate" if args.space == "position" else "momentum_conjugate"
    grid = _grid(args, 0.0, 10.0, 101)
    for n in args.n:
        fq = fourier.fourier_profile(params, n, "quantum_analytic", grid, space).values
        fc = fourier.fourier_profile(params, n, "classical", grid, space).values
        rows += [{"n": n, var: q, "f_quantum": a, "f_classical": b, "difference": a - b}
                 for q, a, b in zip(grid, fq, fc)]
    return rows, {}


def _asymptotic_rows(args):
    quad = _quad(args)
    grid = _grid(args, 0.0, 1.0, 11)
    if grid[0] < 0:
        raise ConfigError("u grid must be non-negative")
    rows = []
    for n in args.n:
        for u in grid:
            sz = asymptotics.SzegoArgs(n + 0.5, float(u))
            rows.append({
                "n": n, "u": u,
                "exact": scaled_laguerre(n, u * u),
                "leading": asymptotics.szego_leading(sz),
                "iterate": asymptotics.szego_iterate(sz, quad),
            })
    return rows, {}


def _correction_rows(args):
    params = _params(args)
    quad = _quad(args)
    if any(not abs(r) < 1 for r in args.x_ratio):
        raise ConfigError("--x-ratio values must lie inside (-1, 1)")
    rows = []
    position = args.space == "position"
    var = "x" if position else "p"
    for n in args.n:
        match = energy_match(params, n)
        amp = match.x0 if position else match.p0
        classical_fn = densities.cpd_position if position else densities.cpd_momentum
        corrected_fn = (asymptotics.corrected_density if position
                        else asymptotics.corrected_density_momentum)
        for r in args.x_ratio:
            v = r * amp
            classical = classical_fn(match, v)
            total = corrected_fn(params, n, match, v, args.kmax, quad)
            i1 = asymptotics.correction_integral_i1(r, quad) if args.kmax else None
            term = total - classical
            rows.append({
                "n": n, "x_ratio": r, var: v,
                "classical": classical, "correction": term, "corrected": total,
                "ratio": term / classical,
                "i1": i1.value if i1 else math.nan,
                "i1_error": i1.error if i1 else math.nan,
            })
    return rows, {}


def _moment_rows(args):
    params = _params(args)
    rows = []
    for n in args.n:
        kw = {} if args.points is None else {"points": args.points}
        m = analysis.energy_moments(params, n, **kw)
        rows.append({
            "n": n,
            "x2_quantum": m.x2_quantum, "x2_classical": m.x2_classical,
            "p2_quantum": m.p2_quantum, "p2_classical": m.p2_classical,
            "energy_quantum": m.energy_quantum, "energy_classical": m.energy_classical,
        })
    return rows, {}


def _sweep_rows(args):
    params = _params(args)
    quad = _quad(args)
    if list(args.n) != sorted(set(args.n)):
        raise ConfigError("--n must be strictly ascending for a sweep")
    kw = {} if args.points is None else {"points": args.points}
    report = analysis.convergence_sweep(params, args.n, window=args.window,
                                        x_ratio=args.x_ratio[0], quad=quad, **kw)
    for msg in report.failures:
        print(f"corrlimit: warning: {msg}", file=sys.stderr)
    return list(report.rows()), dict(report.fitted_exponents)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _json_value(v):
    if isinstance(v, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    if v is None or isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return format(v, ".17g") if math.isfinite(v) else "null"


def render(rows, fits, config, fmt) -> str:
    if fmt == "json":
        body = {"schema": SCHEMA, "config": config, "rows": rows}
        if fits:
            body["fits"] = fits
        return _json_value(body) + "\n"
    lines = [f"# {SCHEMA}"]
    if rows:
        header = list(rows[0])
        lines.append(",".join(header))
        lines += [",".join(_fmt(row[h]) for h in header) for row in rows]
    lines += [f"# fit,{name},{_fmt(val)}" for name, val in fits.items()]
    return "\n".join(lines) + "\n"


def write_atomic(path, text):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".corrlimit-", dir=folder)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _config(args):
    keys = ("subcommand", "n", "hbar", "mass", "omega", "vmin", "vmax", "points", "space",
            "x_ratio", "kmax", "alpha_max", "rtol", "window", "format")
    return {k: getattr(args, k) for k in keys}


def run(args) -> int:
    handlers = {
        "qpd": lambda: _profile_rows(args, "quantum"),
        "cpd": lambda: _profile_rows(args, "classical"),
        "fourier": lambda: _fourier_rows(args),
        "asymptotic": lambda: _asymptotic_rows(args),
        "corrections": lambda: _correction_rows(args),
        "moments": lambda: _moment_rows(args),
        "sweep": lambda: _sweep_rows(args),
    }
    try:
        rows, fits = handlers[args.subcommand]()
    except ConvergenceError as exc:
        print(f"corrlimit: {exc.operation or 'computation'} did not converge: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"corrlimit: configuration error: {exc}", file=sys.stderr)
        return 2
    text = render(rows, fits, _config(args), args.format)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
