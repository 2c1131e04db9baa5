#!/usr/bin/env python3
"""Exact counts vs asymptotic estimates: the error budgets at work.

Each theorem comes with an error expression in (x, y, q) but no absolute
constant.  The package computes both sides exactly and reports
|relative error| / budget; calibration freezes the observed constants
with 2x headroom and the acceptance suite holds the line against them.
"""

import math

from ultrafriable import (
    build_table,
    compare,
    count_ultrafriable,
    estimate_t2,
    estimate_upsilon_q,
    modulus_context,
)
from ultrafriable.calibration import load_constants

CONSTS = load_constants()

print("=" * 76)
print(" Small-y main term x^beta Z_q(beta) G(beta sqrt(sigma2)) at y = 100")
print("=" * 76)
table = build_table(100)
print(f"{'log x':>6} {'q':>3} {'exact':>12} {'rel error':>12} {'budget':>10} {'err/budget':>11}")
for lx in (20, 25, 30, 35, 40):
    for q in (1, 6, 30):
        ctx = modulus_context(q, table)
        est = estimate_upsilon_q(math.exp(lx), table, ctx, "T1i")
        exact = count_ultrafriable(math.exp(lx), table, ctx)
        rec = compare(exact, est)
        print(f"{lx:>6} {q:>3} {exact:>12} {rec.rel_error:>12.3e}"
              f" {rec.budget:>10.3e} {rec.error_over_budget:>11.3f}")
print(f"frozen band constant t1_band_C = {CONSTS['t1_band_C']:.4f}")
print()
print("The error/budget column stays bounded while x spans 9 orders of")
print("magnitude -- the budget expression captures the true error shape.")
print()

print("=" * 76)
print(" Large-y: the friable count approximates the ultrafriable count")
print("=" * 76)
print(f"{'y':>6} {'q':>3} {'Upsilon_q':>10} {'Psi_q':>10} {'rel error':>12} {'err/budget':>11}")
for y in (500, 1000, 2000):
    t = build_table(y)
    for q in (1, 6):
        ctx = modulus_context(q, t)
        est = estimate_t2(10**6, y, q)
        exact = count_ultrafriable(10**6, t, ctx)
        rec = compare(exact, est)
        print(f"{y:>6} {q:>3} {exact:>10} {int(round(est.main)):>10}"
              f" {rec.rel_error:>12.3e} {rec.error_over_budget:>11.3f}")
print(f"frozen band constant t2_band_C = {CONSTS['t2_band_C']:.4f}")
print()
print("Budget here is q*u*log(2u) / (phi(q)*sqrt(y)*log y): halving the")
print("error requires a fourfold increase in y, and the table obliges.")
