"""Command-line front end.

Examples::

  dipolar-discord point --t 0.881297
  dipolar-discord scan --t-range 0.05 5 --t-count 100 --eta 0 --out fig4.csv
  dipolar-discord solve-max --eta 0.5
  dipolar-discord material gypsum --at 300
  dipolar-discord verify --tol 1e-6

Temperatures are reduced, k_B T / D, unless ``--kelvin`` is given together with a
material. Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numerical-domain error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import kernels, oracle
from .correlations import correlation_set
from .errors import DomainError, InvalidStateError, NoBracketError
from .extremum import locate_max_in_field, solve_zero_field_max
from .materials import PRESETS, MaterialSpec, dipolar_constant, load_presets, predict
from .model import DimerParams, ThermalPoint, correlators, gibbs_xstate, spectrum

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_DOMAIN = 0, 1, 2, 3

SCAN_COLUMNS = ("t", "eta", "m", "g_par", "g_perp", "I", "C", "Q", "Q1", "Q2", "E", "Qg")
QUANTITIES = SCAN_COLUMNS[2:]

DEFAULT_VERIFY_T = (0.3, 0.5, 1.0, 2.0, 5.0)
DEFAULT_VERIFY_ETA = (0.0, 0.2, 1.0, 3.0)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _fmt(value, precision: int) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, str):
        return value
    return f"{value + 0.0:.{precision}g}"


def _round(value, precision: int):
    if isinstance(value, float):
        if not math.isfinite(value):
            return None if math.isnan(value) else str(value)
        return float(f"{value + 0.0:.{precision}g}")
    if isinstance(value, dict):
        return {k: _round(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v, precision) for v in value]
    return value


def _emit(text: str, out: Optional[str]):
    """Write to stdout, or atomically to ``out`` (temp file + rename)."""
    if not out:
        sys.stdout.write(text)
        return
    path = Path(out)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _material_from_args(args) -> Optional[MaterialSpec]:
    table = load_presets(args.materials) if getattr(args, "materials", None) else PRESETS
    name = getattr(args, "material", None)
    gamma, r = getattr(args, "gamma", None), getattr(args, "r", None)
    if name is not None:
        if name not in table:
            raise UsageError(f"unknown material {name!r}; known: {', '.join(sorted(table))}")
        return table[name]
    if gamma is not None or r is not None:
        if gamma is None or r is None:
            raise UsageError("--gamma and --r must be given together")
        return MaterialSpec("custom", gamma, r)
    return None


def _reduced_temperatures(values, args) -> list[float]:
    values = [float(v) for v in values]
    if any(math.isnan(v) or v < 0 for v in values):
        raise UsageError("temperatures must be >= 0")
    if not getattr(args, "kelvin", False):
        return values
    spec = _material_from_args(args)
    if spec is None:
        raise UsageError("--kelvin needs --material or --gamma/--r")
    d_kelvin = dipolar_constant(spec)[1]
    return [v / d_kelvin for v in values]


def _axis(single, rng, count, step, name) -> list[float]:
    if rng is None:
        return [single]
    start, stop = rng
    if count is not None and step is not None:
        raise UsageError(f"give either --{name}-count or --{name}-step, not both")
    if step is not None:
        if step <= 0 or stop < start:
            raise UsageError(f"--{name}-range needs start <= stop and a positive step")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(n)]
    count = 50 if count is None else count
    if count < 1 or stop < start:
        raise UsageError(f"--{name}-range needs start <= stop and count >= 1")
    return np.linspace(start, stop, count).tolist()


# ---------------------------------------------------------------------------
# point
# ---------------------------------------------------------------------------

def point_report(delta: float, t_reduced: float, eta: float) -> dict:
    params = DimerParams(delta=delta, eta=eta)
    tp = ThermalPoint.from_t(t_reduced)
    state = gibbs_xstate(params, tp).validate()
    spec = spectrum(params)
    return {
        "params": {"delta": delta, "eta": eta, "t": t_reduced, "x": tp.x},
        "spectrum": {**asdict(spec), "ground": spec.ground},
        "state": asdict(state),
        "correlators": asdict(correlators(params, tp)),
        "correlations": correlation_set(state, eta).as_dict(),
    }


def cmd_point(args) -> int:
    (t,) = _reduced_temperatures([args.t], args)
    report = point_report(args.delta, t, args.eta)
    if args.format == "json":
        text = json.dumps(_round(report, args.precision), indent=2) + "\n"
    else:
        row = _scan_rows(args.delta, [t], [args.eta], jobs=1)[0]
        text = _render_csv([row], SCAN_COLUMNS, args.precision)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRequest:
    delta: float
    t_values: tuple
    eta_values: tuple
    quantities: tuple = QUANTITIES
    fmt: str = "csv"
    precision: int = 12

    def __post_init__(self):
        if not self.t_values or not self.eta_values:
            raise UsageError("scan ranges must be non-empty")
        for vals, name in ((self.t_values, "t"), (self.eta_values, "eta")):
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise UsageError(f"{name} values must be non-decreasing")
        unknown = set(self.quantities) - set(QUANTITIES)
        if unknown:
            raise UsageError(f"unknown quantities: {', '.join(sorted(unknown))}")
        if "Qg" in self.quantities and any(e != 0 for e in self.eta_values) \
                and self.quantities != QUANTITIES:
            raise UsageError("Qg is only defined at eta = 0")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.precision < 1:
            raise UsageError("precision must be >= 1")


def _scan_rows(delta, t_values, eta_values, jobs: int = 1) -> list[dict]:
    xs = np.array([ThermalPoint.from_t(t).x for t in t_values])
    etas = np.asarray(eta_values, dtype=float)
    chunks = np.array_split(np.arange(xs.size), max(1, min(jobs, xs.size)))
    if len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda idx: kernels.scan_grid(delta, xs[idx], etas), chunks))
        table = np.concatenate(parts, axis=0)
    else:
        table = kernels.scan_grid(delta, xs, etas)
    col = {name: k for k, name in enumerate(kernels.COLUMNS)}
    rows = []
    for i, t in enumerate(t_values):
        for j, eta in enumerate(etas):
            vals = table[i, j]
            row = {"t": float(t), "eta": float(eta)}
            for name in ("m", "g_par", "g_perp", "I", "C", "Q", "Q1", "Q2", "E"):
                row[name] = float(vals[col[name]])
            row["Qg"] = float(vals[col["g_perp"]]) ** 2 if eta == 0 else None
            rows.append(row)
    return rows


def _render_csv(rows, columns, precision) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c], precision) for c in columns])
    return buf.getvalue()


def run_scan(req: ScanRequest, jobs: int = 1) -> str:
    rows = _scan_rows(req.delta, list(req.t_values), list(req.eta_values), jobs)
    columns = ("t", "eta") + tuple(q for q in QUANTITIES if q in req.quantities)
    if req.fmt == "csv":
        return _render_csv(rows, columns, req.precision)
    data = [{c: _round(row[c], req.precision) for c in columns} for row in rows]
    return json.dumps({"delta": req.delta, "columns": list(columns), "rows": data}, indent=1) + "\n"


def cmd_scan(args) -> int:
    if args.x_range is not None:
        if args.t_range is not None:
            raise UsageError("give either --t-range or --x-range")
        xs = _axis(None, args.x_range, args.t_count, args.t_step, "x")
        if any(x <= 0 for x in xs):
            raise UsageError("--x-range values must be positive")
        t_values = sorted(1.0 / x for x in xs)
    else:
        t_values = _axis(args.t, args.t_range, args.t_count, args.t_step, "t")
        t_values = _reduced_temperatures(t_values, args)
    eta_values = _axis(args.eta, args.eta_range, args.eta_count, args.eta_step, "eta")
    quantities = tuple(q.strip() for q in args.quantities.split(",")) if args.quantities else QUANTITIES
    req = ScanRequest(args.delta, tuple(t_values), tuple(eta_values), quantities,
                      args.format, args.precision)
    _emit(run_scan(req, jobs=args.jobs), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve-max / material
# ---------------------------------------------------------------------------

def cmd_solve_max(args) -> int:
    if args.eta == 0:
        res = solve_zero_field_max(args.delta)
    else:
        res = locate_max_in_field(args.delta, args.eta)
    payload = {"delta": args.delta, "eta": args.eta, **asdict(res)}
    if args.format == "json":
        text = json.dumps(_round(payload, args.precision), indent=2) + "\n"
    else:
        text = _render_csv([payload], tuple(payload), args.precision)
    _emit(text, args.out)
    return EXIT_OK


def cmd_material(args) -> int:
    spec = _material_from_args(args)
    if spec is None:
        raise UsageError("give a material name or --gamma and --r")
    pred = predict(spec, args.at)
    payload = asdict(pred)
    if args.format == "json":
        text = json.dumps(_round(payload, args.precision), indent=2) + "\n"
    else:
        text = _render_csv([payload], tuple(payload), args.precision)
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def verify_point(delta, t, eta, tol, grid_n=64, refine_iters=40) -> dict:
    """Closed forms against the measurement-optimization oracle at one grid point."""
    params = DimerParams(delta=delta, eta=eta)
    tp = ThermalPoint.from_t(t)
    state = gibbs_xstate(params, tp)
    closed = correlation_set(state, eta)
    rho = state.to_matrix() if tp.is_ground else oracle.gibbs_general(params, tp)
    c_num, direction = oracle.optimal_measurement(rho, grid_n, refine_iters)
    q_num = oracle.mutual_information_numeric(rho) - c_num
    conc_num = oracle.concurrence_general(rho)
    errs = {
        "dQ": abs(closed.discord - q_num),
        "dC": abs(closed.classical - c_num),
        "dconcurrence": abs(closed.concurrence - conc_num),
    }
    return {
        "delta": delta, "t": t, "eta": eta,
        "Q_closed": closed.discord, "Q_oracle": q_num,
        "C_closed": closed.classical, "C_oracle": c_num,
        "concurrence_closed": closed.concurrence, "concurrence_oracle": conc_num,
        "polar": direction.polar, **errs,
        "passed": all(e <= tol for e in errs.values()),
    }


def run_verify(delta, t_values, eta_values, tol, grid_n=64, refine_iters=40, jobs=1) -> list[dict]:
    points = [(t, eta) for t in t_values for eta in eta_values]

    def one(p):
        return verify_point(delta, p[0], p[1], tol, grid_n, refine_iters)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, points))
    return [one(p) for p in points]


def cmd_verify(args) -> int:
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    t_values = _parse_list(args.t_list) if args.t_list else list(DEFAULT_VERIFY_T)
    eta_values = _parse_list(args.eta_list) if args.eta_list else list(DEFAULT_VERIFY_ETA)
    results = run_verify(args.delta, t_values, eta_values, args.tol,
                         args.grid_n, args.refine_iters, args.jobs)
    ok = all(r["passed"] for r in results)
    if args.format == "json":
        text = json.dumps({"tolerance": args.tol, "passed": ok,
                           "points": _round(results, args.precision)}, indent=1) + "\n"
    else:
        lines = []
        for r in results:
            lines.append(
                f"{'PASS' if r['passed'] else 'FAIL'} t={r['t']:g} eta={r['eta']:g} "
                f"|dQ|={r['dQ']:.2e} |dC|={r['dC']:.2e} |dconc|={r['dconcurrence']:.2e} "
                f"conc={r['concurrence_oracle']:.2e}")
        n_fail = sum(not r["passed"] for r in results)
        lines.append(f"{'PASS' if ok else 'FAIL'}: {len(results) - n_fail}/{len(results)} "
                     f"points within {args.tol:g}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_VERIFY


def _parse_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--delta", type=float, default=-2.0, help="anisotropy (default -2, dipolar)")
    common.add_argument("--precision", type=int, default=12, help="significant digits")
    common.add_argument("--out", help="output file (written atomically)")
    common.add_argument("--jobs", type=int, default=1, help="worker threads")

    material = _Parser(add_help=False)
    material.add_argument("--materials", help="preset file with 'name gamma r' records")
    material.add_argument("--gamma", type=float, help="gyromagnetic ratio, rad/(s T)")
    material.add_argument("--r", type=float, help="interspin distance, m")

    parser = _Parser(prog="dipolar-discord", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", parents=[common, material], help="all correlations at one point")
    p.add_argument("--t", type=float, required=True, help="temperature (0 = ground state)")
    p.add_argument("--eta", type=float, default=0.0, help="reduced field h/D")
    p.add_argument("--kelvin", action="store_true", help="--t is in kelvin (needs a material)")
    p.add_argument("--material", help="preset name for --kelvin")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("scan", parents=[common, material], help="table over a (t, eta) grid")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--t-range", type=float, nargs=2, metavar=("START", "STOP"))
    p.add_argument("--x-range", type=float, nargs=2, metavar=("START", "STOP"),
                   help="range of inverse temperature D/k_B T instead of --t-range")
    p.add_argument("--t-count", type=int)
    p.add_argument("--t-step", type=float)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--eta-range", type=float, nargs=2, metavar=("START", "STOP"))
    p.add_argument("--eta-count", type=int)
    p.add_argument("--eta-step", type=float)
    p.add_argument("--quantities", help=f"comma list from {','.join(QUANTITIES)}")
    p.add_argument("--kelvin", action="store_true")
    p.add_argument("--material")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("solve-max", parents=[common], help="temperature of maximal discord")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_solve_max)

    p = sub.add_parser("material", parents=[common, material], help="SI predictions for a material")
    p.add_argument("material", nargs="?", help=f"preset name ({', '.join(PRESETS)})")
    p.add_argument("--at", type=float, help="also evaluate Q at this temperature (K)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_material)

    p = sub.add_parser("verify", parents=[common], help="closed forms vs brute-force oracle")
    p.add_argument("--t-list", help="comma-separated reduced temperatures")
    p.add_argument("--eta-list", help="comma-separated fields")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--grid-n", type=int, default=64)
    p.add_argument("--refine-iters", type=int, default=40)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dipolar-discord: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InvalidStateError, NoBracketError) as exc:
        print(f"dipolar-discord: numerical error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        print(f"dipolar-discord: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
