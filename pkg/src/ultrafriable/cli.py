"""Command-line front end: single queries, sweeps, calibration, CSV/JSON.

Subcommands: count, saddle, estimate, compare, chars, sweep, calibrate.
Rows follow one fixed column schema across all modes (unused cells stay
empty); re-running an identical configuration yields byte-identical rows.
x accepts decimal (123), scientific (1e6) and log-space (e30 or e^30)
literals; grids are either comma lists or lo:hi:n, log-spaced.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from . import calibration as cal
from . import characters as ch
from . import counting as ct
from . import estimators as es
from . import primes as pr
from . import saddle as sd
from .errors import UltrafriableError

COLUMNS = [
    "mode", "x", "log_x", "y", "q", "a", "variant", "regime",
    "exact_value_or_log", "est_log_main", "rel_error", "budget",
    "error_over_budget", "beta", "sigma2", "u", "eta", "omega_q",
    "delta_q", "d_q", "c_q", "status",
    # saddle-mode extras, appended after the core schema
    "alpha", "sigma3", "sigma4", "residual",
]

EXACT_PRINT_LIMIT = 10**30


def parse_x(text: str) -> float:
    """Parse decimal, scientific, or e^k / ek log-space literals."""
    t = text.strip()
    if t.startswith("e^"):
        return math.exp(float(t[2:]))
    if t and t[0] == "e":
        try:
            return math.exp(float(t[1:]))
        except ValueError:
            pass
    return float(t)


def parse_grid(text: str, parser=parse_x, log_spaced: bool = True) -> list:
    """A comma list, or lo:hi:n expanded log-spaced."""
    if ":" in text:
        lo_s, hi_s, n_s = text.split(":")
        lo, hi, n = parser(lo_s), parser(hi_s), int(n_s)
        if n < 1:
            raise ValueError("grid needs n >= 1")
        if n == 1:
            return [lo]
        if log_spaced:
            llo, lhi = math.log(lo), math.log(hi)
            return [math.exp(llo + i * (lhi - llo) / (n - 1)) for i in range(n)]
        return [lo + i * (hi - lo) / (n - 1) for i in range(n)]
    return [parser(p) for p in text.split(",") if p.strip()]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if v != v:
            return "nan"
        return format(v, ".12g")
    return str(v)


def _fmt_count(n: int) -> str:
    """Counts are printed exactly below 10^30, as log10 beyond."""
    if n < EXACT_PRINT_LIMIT:
        return str(n)
    return "log10=" + format(math.log10(n), ".12g")


def _blank_row(spec: dict) -> dict:
    row = {c: None for c in COLUMNS}
    row["mode"] = spec["mode"]
    if spec.get("x") is not None:
        row["x"] = _fmt(spec["x"])
        row["log_x"] = math.log(spec["x"])
    row["y"] = spec.get("y")
    row["q"] = spec.get("q")
    row["a"] = spec.get("a")
    row["variant"] = spec.get("variant")
    return row


def _fill_budget(row: dict, bud: es.ErrorBudget):
    row["regime"] = bud.regime.kind
    row["u"] = bud.u
    row["eta"] = bud.eta
    row["delta_q"] = bud.delta_q
    row["d_q"] = bud.dd_q
    row["c_q"] = bud.cc_q
    row["budget"] = bud.stated_bound


def compute_row(spec: dict) -> dict:
    """Evaluate one grid point; errors land in the status column."""
    row = _blank_row(spec)
    try:
        _dispatch(spec, row)
        if row["status"] is None:
            row["status"] = "ok"
    except UltrafriableError as exc:
        row["status"] = f"{type(exc).__name__}: {exc}"
    return row


def _dispatch(spec: dict, row: dict):
    mode = spec["mode"]
    x, y, q, a = spec.get("x"), spec.get("y"), spec.get("q"), spec.get("a")
    eps = spec.get("epsilon", es.DEFAULT_EPSILON)

    if mode == "count":
        kind = spec.get("variant") or "ultrafriable"
        row["variant"] = kind
        if kind == "friable":
            if a is not None:
                n = ct.count_friable_progression(x, y, a, q or 1)
            else:
                n = ct.count_friable(x, y, q or 1)
        else:
            table = pr.build_table(y)
            row["regime"] = pr.classify_regime(max(x, 2.0), table, eps).kind
            if a is not None:
                n = ct.count_ultrafriable_residues(x, table, q or 1)[a]
            else:
                ctx = pr.modulus_context(q or 1, table)
                n = ct.count_ultrafriable(x, table, ctx)
        row["exact_value_or_log"] = _fmt_count(n)
        return

    if mode == "saddle":
        table = pr.build_table(y)
        regime = pr.classify_regime(x, table, eps)
        row["regime"] = regime.kind
        row["u"] = regime.u
        row["eta"] = regime.eta
        if regime.small_y:
            res = sd.solve_beta(x, table)
            row["beta"] = res.sigma
            row["sigma2"] = res.sigma_j[2]
            row["sigma3"] = res.sigma_j[3]
            row["sigma4"] = res.sigma_j[4]
            row["residual"] = res.residual
        if x >= y:
            row["alpha"] = sd.solve_alpha(x, y).sigma
        return

    if mode == "chars":
        # one row per character: index in the a column, t3 ratio as exact value
        idx = spec["char_index"]
        chi = ch.enumerate_characters(q)[idx]
        row["a"] = idx
        row["variant"] = "T3"
        row["status"] = (
            f"order={chi.order}"
            + (";principal" if chi.is_principal else "")
            + (";real" if chi.is_real else "")
        )
        if x is not None and y is not None and not chi.is_principal:
            table = pr.build_table(y)
            ctx = pr.modulus_context(q, table)
            diag = es.t3_bound(x, table, ctx, chi, epsilon=eps, c1=spec.get("c1", es.DEFAULT_C1))
            row["exact_value_or_log"] = _fmt(diag.exact_ratio)
            row["budget"] = diag.bound_theta1
            row["error_over_budget"] = diag.exact_ratio / diag.bound_theta1
            row["u"] = diag.u
            row["regime"] = pr.classify_regime(x, table, eps).kind
        return

    table = pr.build_table(y)
    ctx = pr.modulus_context(q or 1, table)

    if mode in ("estimate", "compare"):
        variant = spec.get("variant") or "T1i"
        row["variant"] = variant
        est, exact = _estimate_and_exact(variant, x, table, ctx, a, spec, mode)
        row["est_log_main"] = est.log_main
        row["beta"] = est.beta
        row["sigma2"] = est.sigma2
        _fill_budget(row, est.budget)
        row["omega_q"] = ctx.omega_q
        if mode == "compare":
            rec = es.compare(exact, est)
            row["exact_value_or_log"] = _fmt_count(exact)
            row["rel_error"] = rec.rel_error
            row["error_over_budget"] = rec.error_over_budget
        return

    raise ValueError(f"unknown mode {mode!r}")


def _estimate_and_exact(variant, x, table, ctx, a, spec, mode):
    eps = spec.get("epsilon", es.DEFAULT_EPSILON)
    c0 = spec.get("c0", es.DEFAULT_C0)
    c1 = spec.get("c1", es.DEFAULT_C1)
    c2 = spec.get("c2", es.DEFAULT_C2)
    need_exact = mode == "compare"
    if variant == "UPS":
        est = es.estimate_upsilon(x, table, eps)
        exact = ct.count_ultrafriable(x, table, pr.modulus_context(1, table)) if need_exact else 0
    elif variant in es.VARIANTS_UPSILON_Q:
        est = es.estimate_upsilon_q(x, table, ctx, variant, eps)
        exact = ct.count_ultrafriable(x, table, ctx) if need_exact else 0
    elif variant == "T2":
        est = es.estimate_t2(x, table.y, ctx.q, eps)
        exact = ct.count_ultrafriable(x, table, ctx) if need_exact else 0
    elif variant in es.VARIANTS_PROGRESSION:
        if a is None:
            raise ValueError("T4/T5 need a residue class --a")
        est = es.estimate_progression(x, table, ctx, a, variant, eps, c0, c1, c2)
        exact = ct.count_ultrafriable_residues(x, table, ctx.q)[a] if need_exact else 0
    elif variant == "R6":
        if a is None:
            raise ValueError("R6 needs a residue class --a")
        est = es.estimate_noncoprime(x, table, ctx.q, a, eps, c0, c1)
        exact = ct.count_ultrafriable_residues(x, table, ctx.q)[a] if need_exact else 0
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return est, exact


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list[dict], config: dict, elapsed: float) -> str:
    payload = {
        "meta": {
            "version": __version__,
            "config": config,
            "timing_seconds": round(elapsed, 6),
        },
        "rows": [{c: (_fmt(row.get(c)) if row.get(c) is not None else None) for c in COLUMNS}
                 for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, out: str | None) -> int:
    try:
        if out:
            with open(out, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing and grid expansion
# ---------------------------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--x", type=parse_x, default=None)
    sp.add_argument("--x-grid", type=str, default=None)
    sp.add_argument("--y", type=int, default=None)
    sp.add_argument("--y-grid", type=str, default=None)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--q-grid", type=str, default=None)
    sp.add_argument("--a", type=int, default=None)
    sp.add_argument("--a-grid", type=str, default=None)
    sp.add_argument("--variant", type=str, default=None,
                    help="T1i|T1ii|T1iii|REMC|T2|T4|T5|R6|UPS, or count kind, comma list for sweep")
    sp.add_argument("--epsilon", type=float, default=es.DEFAULT_EPSILON)
    sp.add_argument("--c0", type=float, default=es.DEFAULT_C0)
    sp.add_argument("--c1", type=float, default=es.DEFAULT_C1)
    sp.add_argument("--c2", type=float, default=es.DEFAULT_C2)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--jobs", type=int, default=0,
                    help="worker processes for sweep rows; 0 = available parallelism")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ultrafriable",
        description="Exact ultrafriable/friable counts and their saddle-point estimates.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("count", "exact counts (ultrafriable by default, --variant friable)"),
        ("saddle", "solve the saddle equations at (x, y)"),
        ("estimate", "main term and error budget for a theorem variant"),
        ("compare", "exact count vs estimate with error/budget ratio"),
        ("chars", "character table and character-sum diagnostics"),
        ("sweep", "compare over the full grid cross-product"),
    ):
        _add_common(sub.add_parser(name, help=descr))
    cp = sub.add_parser("calibrate", help="run band calibration, print key=value constants")
    cp.add_argument("--fast", action="store_true", help="smaller sweep grids")
    cp.add_argument("--out", type=str, default=None)
    return ap


def _expand_grids(args, modes_variants: list[str]) -> list[dict]:
    xs = parse_grid(args.x_grid) if args.x_grid else [args.x]
    ys = [int(v) for v in parse_grid(args.y_grid, parser=float)] if args.y_grid else [args.y]
    qs = [int(v) for v in parse_grid(args.q_grid, parser=float)] if args.q_grid else [args.q]
    sas = [int(v) for v in parse_grid(args.a_grid, parser=float)] if args.a_grid else [args.a]
    specs = []
    for variant in modes_variants:
        for x in xs:
            for y in ys:
                for q in qs:
                    for a in sas:
                        specs.append({
                            "mode": args.command if args.command != "sweep" else "compare",
                            "x": x, "y": y, "q": q, "a": a, "variant": variant,
                            "epsilon": args.epsilon, "c0": args.c0,
                            "c1": args.c1, "c2": args.c2,
                        })
    return specs


def _compute_all(specs: list[dict], jobs: int) -> list[dict]:
    if jobs == 0:
        jobs = os.cpu_count() or 1
    if jobs == 1 or len(specs) <= 1:
        return [compute_row(s) for s in specs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(compute_row, specs))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "calibrate":
        text = cal.format_constants(cal.run_calibration(fast=args.fast))
        return _emit(text, args.out)

    t0 = time.perf_counter()
    if args.command == "chars":
        if args.q is None:
            print("chars needs --q", file=sys.stderr)
            return 2
        n_chars = len(ch.enumerate_characters(args.q))
        specs = [{
            "mode": "chars", "x": args.x, "y": args.y, "q": args.q,
            "char_index": i, "epsilon": args.epsilon, "c1": args.c1,
        } for i in range(n_chars)]
    else:
        variants = (args.variant.split(",") if args.variant else [None])
        specs = _expand_grids(args, variants)
        for s in specs:
            if s["x"] is None or (s["y"] is None and s["mode"] != "count"):
                print(f"{args.command} needs --x and --y", file=sys.stderr)
                return 2
            if s["y"] is None:
                print(f"{args.command} needs --y", file=sys.stderr)
                return 2

    rows = _compute_all(specs, args.jobs)
    elapsed = time.perf_counter() - t0
    config = {k: v for k, v in vars(args).items() if k not in ("command",) and v is not None}
    config["command"] = args.command
    if args.format == "json":
        text = rows_to_json(rows, config, elapsed)
    else:
        text = rows_to_csv(rows)
    return _emit(text, args.out)


if __name__ == "__main__":
    sys.exit(main())
