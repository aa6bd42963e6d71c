"""Command-line entry point.

Subcommands: check, solve, sweep, fit, census, all. Every run reads one JSON
config (see :mod:`radnodal.config`) and writes into ``--out``.

solve.csv columns (fixed order):
  k, datum, interior_zeros, zeros, terminal_residual, relative_terminal_residual,
  J_radial, J_direct, kinetic, nehari_residual, slope_at_start, ode_residual, error
fit.csv columns:
  mode, exponent, intercept, r_squared, k_min, k_max, target, C_est, k_at_C_est, ratio_spread
census.csv columns:
  energy_cap, radial_count, minmax_lower, nonradial_lower, c2, sigma
sweep.csv columns:
  datum, zero_count, terminal_sign, score

Exit codes: 0 success, 1 hypothesis or solve failure, 2 usage/parse/I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from dataclasses import replace

import numpy as np

from . import analysis, model, svgplot
from .config import ConfigError, RunConfig
from .energy import energy_direct
from .errors import DataError, RadnodalError
from .nonlinearity import check_H2_H3, check_H4, check_H5, check_remark1
from .shooting import solve_ladder, sweep
from .weight import check_condition_main, check_H1

SOLVE_COLUMNS = [
    "k", "datum", "interior_zeros", "zeros", "terminal_residual", "relative_terminal_residual",
    "J_radial", "J_direct", "kinetic", "nehari_residual", "slope_at_start", "ode_residual", "error",
]
FIT_COLUMNS = ["mode", "exponent", "intercept", "r_squared", "k_min", "k_max", "target",
               "C_est", "k_at_C_est", "ratio_spread"]
CENSUS_COLUMNS = ["energy_cap", "radial_count", "minmax_lower", "nonradial_lower", "c2", "sigma"]


class UsageError(RadnodalError):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _write_csv(path, columns, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])


def parse_k_list(text: str) -> list:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(\d+)-(\d+)", part)
        if m:
            out.extend(range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(int(part))
    return out


# --------------------------------------------------------------------------
# check

def run_checks(problem):
    """[(label, report, required)] for every applicable hypothesis."""
    N, nl = problem.N, problem.nonlinearity
    out = []
    if problem.is_ball:
        out.append(("uniqueness-condition", check_condition_main(problem.weight, N, nl.p), True))
        if nl.superlinear:
            out.append(("H2-H3", check_H2_H3(nl), False))
            out.append(("H5", check_H5(nl), False))
    else:
        a, b = problem.interval
        out.append(("H1", check_H1(problem.weight, N, (a, b)), True))
        out.append(("H2-H3", check_H2_H3(nl), True))
        out.append(("H4", check_H4(nl, nl.p) if nl.superlinear else check_H4(nl, 1.0), True))
        out.append(("H5", check_H5(nl), True))
        try:
            out.append(("derived-growth", check_remark1(nl, nl.p), False))
        except (RadnodalError, ValueError):
            pass
    return out


def _short(x: float) -> float:
    # 12 significant digits, and no negative zero
    return float(f"{x:.12g}") + 0.0


def _describe(label, rep):
    state = "HOLDS" if rep.holds else "FAILS"
    if hasattr(rep, "worst_value"):
        return f"{label}: {state} (worst {_short(rep.worst_value)!r}, witness {rep.witness_r:.6g})"
    name = "C" if label == "H4" else "theta"
    return f"{label}: {state} ({name} {_short(rep.constant)!r})"


def cmd_check(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    problem = cfg.problem()
    reports = run_checks(problem)
    for label, rep, required in reports:
        print(_describe(label, rep) + ("" if required else "  [informational]"), file=out)
    lo, hi = model.subcritical_range(problem.N)
    print(f"subcritical: {'YES' if problem.is_subcritical else 'NO'} (p={problem.nonlinearity.p:g}, range ({lo:g}, {hi:g}))",
          file=out)
    return 0 if all(rep.holds for _, rep, req in reports if req) else 1


# --------------------------------------------------------------------------
# solve

def solve_rows(cfg: RunConfig, ks):
    problem, opts = cfg.problem(), cfg.options()
    valid = [k for k in ks if isinstance(k, int) and k >= 1]
    solved = solve_ladder(problem, sorted(set(valid)), opts, tuple(cfg.solver.datum_range), cfg.solver.sweep_points)
    rows, results = [], {}
    for k in ks:
        row = {"k": k}
        if k not in solved:
            row["error"] = "k must be >= 1"
            rows.append(row)
            continue
        res = solved[k]
        if isinstance(res, Exception):
            row["error"] = f"{type(res).__name__}: {res}"
            rows.append(row)
            continue
        e = energy_direct(problem, res.profile)
        res = replace(res, energy=e)
        results[k] = res
        row.update(
            datum=float(res.datum),
            interior_zeros=len(res.zeros),
            zeros=";".join(fmt(float(z)) for z in res.zeros),
            terminal_residual=float(res.terminal_value),
            relative_terminal_residual=float(res.terminal_value / res.scale),
            J_radial=float(e.J_radial),
            J_direct=float(e.J_direct),
            kinetic=float(e.kinetic),
            nehari_residual=float(e.nehari_residual),
            slope_at_start=float(res.slope_at_start),
            ode_residual=float(res.residual),
        )
        rows.append(row)
    return rows, results


def _profile_svg(results, path):
    series = []
    for k, res in sorted(results.items()):
        prof = res.profile
        r = np.linspace(prof.r[0], prof.r_end, 400)
        v = prof(r)[0] / prof.scale
        series.append((f"k={k}", list(r), list(v), False))
    if series:
        svgplot.line_plot(series, path, title="radial nodal profiles (normalized)", xlabel="r", ylabel="v / max|v|")


def cmd_solve(cfg: RunConfig, ks, out_dir, svg=False, force=False, out=None) -> int:
    out = out or sys.stdout
    if not force:
        buf = io.StringIO()
        if cmd_check(cfg, out=buf) != 0:
            print(buf.getvalue(), end="", file=out)
            print("hypotheses fail; rerun with --force to solve anyway", file=out)
            return 1
    rows, results = solve_rows(cfg, ks)
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(os.path.join(out_dir, "solve.csv"), SOLVE_COLUMNS, rows)
    with open(os.path.join(out_dir, "solve.json"), "w") as fh:
        recs = []
        for row in rows:
            rec = dict(row)
            if "zeros" in rec:
                rec["zeros"] = [float(z) for z in rec["zeros"].split(";") if z]
            recs.append(rec)
        json.dump(recs, fh, indent=2)
        fh.write("\n")
    if svg:
        _profile_svg(results, os.path.join(out_dir, "profiles.svg"))
    for row in rows:
        if row.get("error"):
            print(f"k={row['k']}: error {row['error']}", file=out)
        else:
            print(f"k={row['k']}: datum {row['datum']:.12g}, J {row['J_radial']:.10g}", file=out)
    return 1 if any(row.get("error") for row in rows) else 0


# --------------------------------------------------------------------------
# fit / census

def read_levels(path):
    """(k, J) pairs from a CSV with columns ``k`` and ``J_radial`` (or ``J``)."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise UsageError(f"cannot read levels file {path}: {exc.strerror}") from None
    with fh:
        reader = csv.DictReader(fh)
        col = "J_radial" if "J_radial" in (reader.fieldnames or []) else "J"
        if "k" not in (reader.fieldnames or []) or col not in reader.fieldnames:
            raise DataError(f"{path}: need columns 'k' and 'J_radial' (or 'J')")
        levels = []
        for lineno, row in enumerate(reader, start=2):
            if row.get("error"):
                continue
            try:
                k, J = int(row["k"]), float(row[col])
            except (TypeError, ValueError):
                raise DataError(f"{path}, row {lineno}: cannot parse k/J") from None
            if not J > 0 or not math.isfinite(J):
                raise DataError(f"{path}, row {lineno}: level J={J} for k={k} is not positive")
            levels.append((k, J))
    return levels


def fit_rows(cfg: RunConfig, levels):
    problem = cfg.problem()
    N, p = problem.N, problem.nonlinearity.p
    kr = cfg.task.fit_k_range
    sel = [(k, J) for k, J in levels if kr is None or kr[0] <= k <= kr[1]]
    rows = []
    modes = [cfg.task.fit_mode] + [m for m in ("shifted", "plain") if m != cfg.task.fit_mode]
    lb = analysis.lower_bound_constant([(k, J) for k, J in sel if k >= 2], N, p)
    for mode in modes:
        pts = [(k, J) for k, J in sel if mode == "plain" or k >= 2]
        fit = analysis.fit_exponent(pts, mode, N, p)
        rows.append({
            "mode": mode, "exponent": fit.exponent, "intercept": fit.intercept, "r_squared": fit.r_squared,
            "k_min": fit.k_range[0], "k_max": fit.k_range[1], "target": fit.target,
            "C_est": lb.C_est, "k_at_C_est": lb.k_min, "ratio_spread": lb.spread,
        })
    return rows


def _fit_svg(levels, target, path):
    pts = [(math.log(k - 1), math.log(J)) for k, J in levels if k >= 2]
    if len(pts) < 2:
        return
    xs, ys = zip(*pts)
    x_ref, y_ref = xs[-1], ys[-1]
    ref = [y_ref + target * (x - x_ref) for x in xs]
    svgplot.line_plot([("log J_k", xs, ys, False), (f"slope {target:g}", xs, ref, True)], path,
                      title="radial critical levels", xlabel="log(k-1)", ylabel="log J", markers=True)


def census_rows(cfg: RunConfig, levels):
    problem = cfg.problem()
    s = cfg.task.sigma if cfg.task.sigma is not None else model.sigma(problem.N, problem.nonlinearity.p)
    rows = []
    for E in sorted(cfg.task.energy_caps):
        rep = analysis.census(levels, cfg.task.c2, s, float(E))
        rows.append({c: getattr(rep, c) for c in CENSUS_COLUMNS})
    return rows


def _levels_for(cfg, out_dir, levels_path):
    path = levels_path or cfg.task.levels_file or os.path.join(out_dir, "solve.csv")
    return read_levels(path)


def cmd_fit(cfg, out_dir, levels_path=None, svg=False, out=None) -> int:
    out = out or sys.stdout
    levels = _levels_for(cfg, out_dir, levels_path)
    rows = fit_rows(cfg, levels)
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(os.path.join(out_dir, "fit.csv"), FIT_COLUMNS, rows)
    for row in rows:
        print(f"{row['mode']}: exponent {row['exponent']:.6f} (target {row['target']:g}), R^2 {row['r_squared']:.6f}",
              file=out)
    print(f"C_est {rows[0]['C_est']:.6g} at k={rows[0]['k_at_C_est']}, ratio spread {rows[0]['ratio_spread']:.3f}",
          file=out)
    if svg:
        _fit_svg(levels, rows[0]["target"], os.path.join(out_dir, "fit.svg"))
    return 0


def cmd_census(cfg, out_dir, levels_path=None, out=None) -> int:
    out = out or sys.stdout
    levels = _levels_for(cfg, out_dir, levels_path)
    rows = census_rows(cfg, levels)
    os.makedirs(out_dir, exist_ok=True)
    _write_csv(os.path.join(out_dir, "census.csv"), CENSUS_COLUMNS, rows)
    for row in rows:
        print(f"E={row['energy_cap']:.6g}: radial {row['radial_count']}, min-max >= {row['minmax_lower']}, "
              f"nonradial >= {row['nonradial_lower']}", file=out)
    return 0


def cmd_sweep(cfg, out_dir, out=None) -> int:
    out = out or sys.stdout
    pts = sweep(cfg.problem(), tuple(cfg.solver.datum_range), cfg.solver.sweep_points, cfg.options())
    os.makedirs(out_dir, exist_ok=True)
    rows = [dict(zip(["datum", "zero_count", "terminal_sign", "score"], p)) for p in pts]
    _write_csv(os.path.join(out_dir, "sweep.csv"), ["datum", "zero_count", "terminal_sign", "score"], rows)
    print(f"{len(rows)} data classified", file=out)
    return 0


# --------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(
        prog="radnodal",
        description="Radial nodal solutions of weighted superlinear elliptic problems.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("command", choices=["check", "solve", "sweep", "fit", "census", "all"])
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output directory (default: config output.dir)")
    ap.add_argument("--tol", type=float, help="override solver rel_tol and abs_tol")
    ap.add_argument("--force", action="store_true", help="solve even if hypotheses fail")
    ap.add_argument("--k", help="nodal classes, e.g. 1,2,5-8")
    ap.add_argument("--levels", help="levels CSV for fit/census (default: <out>/solve.csv)")
    ap.add_argument("--svg", action="store_true", help="also write SVG plots")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        if args.tol is not None:
            cfg.solver.rel_tol = cfg.solver.abs_tol = args.tol
            cfg.options()
        ks = parse_k_list(args.k) if args.k else list(cfg.task.k)
        out_dir = args.out or cfg.output.dir
        svg = args.svg or cfg.output.svg
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "solve":
            return cmd_solve(cfg, ks, out_dir, svg, args.force)
        if args.command == "sweep":
            return cmd_sweep(cfg, out_dir)
        if args.command == "fit":
            return cmd_fit(cfg, out_dir, args.levels, svg)
        if args.command == "census":
            return cmd_census(cfg, out_dir, args.levels)
        if cmd_check(cfg) != 0 and not args.force:
            print("hypotheses fail; rerun with --force to solve anyway")
            return 1
        code = cmd_solve(cfg, ks, out_dir, svg, force=True)
        cmd_fit(cfg, out_dir, None, svg)
        cmd_census(cfg, out_dir)
        return code
    except (ConfigError, UsageError, DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
