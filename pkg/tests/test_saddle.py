import math

import mpmath as mp
import numpy as np
import pytest

from ultrafriable import (
    DomainError,
    RegimeError,
    arithmetic_factors,
    build_table,
    gaussian_G,
    log_Z_q,
    modulus_context,
    phi1,
    phi_j_q,
    solve_alpha,
    solve_beta,
    xi,
)
from ultrafriable.calibration import load_constants
from ultrafriable.estimators import L_eps
from ultrafriable.saddle import phi1_limit_at_zero

CONSTS = load_constants()


def logz_mp(s, table, q_primes=()):
    """Independent high-precision log Z_q for finite-difference oracles."""
    tot = mp.mpf(0)
    for p, nu, _ in table.entries:
        if p in q_primes:
            continue
        tot += mp.log((1 - mp.power(p, -(nu + 1) * s)) / (1 - mp.power(p, -s)))
    return tot


# ---------------------------------------------------------------------------
# xi
# ---------------------------------------------------------------------------

def test_xi_at_one():
    assert xi(1) == 0.0


def test_xi_defining_equation():
    for v in [1.0001, 1.5, 2, 10, 100, 1e4, 1e6, 1e9]:
        z = xi(v)
        assert abs(math.exp(z) - 1 - v * z) <= 1e-12 * (1 + v * z)
    with pytest.raises(DomainError):
        xi(0.5)


def test_xi_bracket_v10():
    z = xi(10)
    assert 0 < z < 10
    assert math.exp(z) == pytest.approx(1 + 10 * z, rel=1e-12)


def test_xi_asymptotic_band():
    assert abs(xi(1e6) - math.log(1e6 * math.log(1e6))) <= 0.5


def test_xi_increasing():
    vs = np.geomspace(1.001, 1e9, 60)
    zs = [xi(float(v)) for v in vs]
    assert all(b > a for a, b in zip(zs, zs[1:]))


# ---------------------------------------------------------------------------
# beta
# ---------------------------------------------------------------------------

def test_solve_beta_residual(table100):
    res = solve_beta(10**6, table100)
    assert res.kind == "BETA"
    assert res.residual <= 1e-10
    assert res.sigma_j[2] > 0


def test_beta_band_spec_point(table100):
    res = solve_beta(10**6, table100)
    eta = table100.psi_y / math.log(10**6) - 2
    ly = math.log(100)
    assert 0 < res.sigma < 1
    K = CONSTS["beta_approx_K"]
    assert abs(res.sigma * ly / math.log1p(eta) - 1) <= K / ly


def test_beta_monotone_in_x(table100):
    b1 = solve_beta(10**6, table100).sigma
    b2 = solve_beta(2 * 10**6, table100).sigma
    assert b2 < b1


def test_beta_regime_error(table10):
    with pytest.raises(RegimeError) as ei:
        solve_beta(10**6, table10)
    assert ei.value.phi1_limit == pytest.approx(table10.psi_y / 2, rel=1e-12)
    assert "symmetry" in str(ei.value)


def test_phi1_limit_and_monotone(table100):
    lim = phi1_limit_at_zero(table100)
    assert lim == pytest.approx(table100.psi_y / 2, rel=1e-12)
    assert phi1(1e-9, table100) == pytest.approx(lim, rel=1e-6)
    grid = np.geomspace(1e-6, 5.0, 40)
    vals = [phi1(float(s), table100) for s in grid]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_one_minus_beta_bands():
    lo, hi = CONSTS["one_minus_beta_lo"], CONSTS["one_minus_beta_hi"]
    plo, phi_ = CONSTS["y_pow_one_minus_beta_lo"], CONSTS["y_pow_one_minus_beta_hi"]
    for y in (40, 80, 150, 600):
        table = build_table(y)
        for t in (0.1, 0.2, 0.35, 0.45):
            lx = table.psi_y * t
            if lx < math.log(y):
                continue
            res = solve_beta(math.exp(lx), table)
            u = lx / math.log(y)
            r = (1 - res.sigma) * math.log(y) / math.log(2 * u)
            assert lo <= r <= hi
            r2 = y ** (1 - res.sigma) / (u * math.log(2 * u))
            assert plo <= r2 <= phi_


# ---------------------------------------------------------------------------
# alpha
# ---------------------------------------------------------------------------

def test_solve_alpha_residual():
    res = solve_alpha(10**6, 100)
    assert res.kind == "ALPHA"
    assert res.residual <= 1e-10


def test_alpha_at_x_equal_y():
    # direct evaluation of the defining sum at alpha = 1 places alpha(y, y)
    # relative to 1: above for y in {3, 5, 7}, below from y = 11 on
    for y, above in ((3, True), (5, True), (7, True), (11, False), (100, False)):
        table = build_table(y)
        s1 = float(np.dot(table.logp_arr, 1.0 / (np.array(table.primes, float) - 1)))
        alpha = solve_alpha(y, y).sigma
        if above:
            assert s1 > math.log(y) and alpha > 1
        else:
            assert s1 < math.log(y) and alpha < 1


def test_alpha_asymptotic_band():
    res = solve_alpha(10**8, 10**4)
    u = math.log(10**8) / math.log(10**4)
    approx = 1 - xi(u) / math.log(10**4)
    K = CONSTS["alpha_approx_K"]
    assert abs(res.sigma - approx) <= K * (1 / (u * math.log(10**4) ** 2) + 1 / L_eps(10**4))


# ---------------------------------------------------------------------------
# phi_j and log Z
# ---------------------------------------------------------------------------

def test_phi_j1_matches_closed_form(table100):
    for s in (1e-4, 1e-2, 0.3, 1.0, 4.0):
        a = phi_j_q(1, s, table100)
        b = phi1(s, table100)
        assert abs(a - b) <= 1e-12 * abs(b)


def test_phi_j1_matches_closed_form_with_q(table100):
    ctx = modulus_context(30, table100)
    for s in (0.01, 0.2, 1.0):
        assert phi_j_q(1, s, table100, ctx) == pytest.approx(phi1(s, table100, ctx), rel=1e-12)


def test_sigma2_positive_and_q_restricted(table100):
    res = solve_beta(10**6, table100)
    b = res.sigma
    s2 = phi_j_q(2, b, table100)
    ctx = modulus_context(6, table100)
    s2q = phi_j_q(2, b, table100, ctx)
    assert 0 < s2q <= s2


def test_phi_j_vs_finite_differences(table100):
    mp.mp.dps = 40
    res = solve_beta(10**5, table100)
    b = mp.mpf(res.sigma)
    h = mp.mpf("1e-4")
    for q_primes, ctx in (((), None), ((2, 3), modulus_context(6, table100))):
        f = [logz_mp(b + k * h, table100, q_primes) for k in (-2, -1, 0, 1, 2)]
        d2 = (f[3] - 2 * f[2] + f[1]) / h**2
        d3 = (f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h**3)
        d4 = (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / h**4
        for j, fd in ((2, d2), (3, -d3), (4, d4)):
            got = phi_j_q(j, res.sigma, table100, ctx)
            assert abs(got - float(fd)) <= 1e-5 * abs(float(fd))


def test_log_Z_example_y10(table10):
    expect = math.log((15 / 8) * (13 / 9) * (6 / 5) * (8 / 7))
    assert log_Z_q(1.0, table10) == pytest.approx(expect, rel=1e-13)


def test_log_Z_empty_product(table10):
    ctx = modulus_context(210, table10)
    assert log_Z_q(1.0, table10, ctx) == 0.0


def test_log_Z_complex_consistency(table100):
    a = log_Z_q(0.4, table100)
    z = log_Z_q(complex(0.4, 0.0), table100)
    assert z.imag == pytest.approx(0.0, abs=1e-12)
    assert z.real == pytest.approx(a, rel=1e-12)
    with pytest.raises(DomainError):
        log_Z_q(complex(-0.1, 1.0), table100)


def test_Zq_g_identity(table100):
    # Z_q = g_q * Z: restricting the product divides out exactly the
    # factors that g_q reinstates
    res = solve_beta(10**7, table100)
    b = res.sigma
    for q in (2, 6, 30, 210):
        ctx = modulus_context(q, table100)
        g = arithmetic_factors(b, ctx, table100).g_q
        lhs = math.exp(log_Z_q(b, table100, ctx))
        rhs = g * math.exp(log_Z_q(b, table100))
        assert abs(lhs - rhs) <= 1e-11 * rhs


def test_sigma2_gap_is_gamma2(table100):
    res = solve_beta(10**6, table100)
    b = res.sigma
    for q in (6, 30):
        ctx = modulus_context(q, table100)
        gap = phi_j_q(2, b, table100) - phi_j_q(2, b, table100, ctx)
        g2 = arithmetic_factors(b, ctx, table100).gamma2_q
        assert abs(gap - (-g2)) <= 1e-9 * abs(gap)


# ---------------------------------------------------------------------------
# arithmetic factors
# ---------------------------------------------------------------------------

def test_factors_q1(table10):
    ctx = modulus_context(1, table10)
    f = arithmetic_factors(1.0, ctx, table10)
    assert f.g_q == 1.0 and f.f_q == 1.0
    assert f.gamma1_q == 0.0 and f.gamma2_q == 0.0


def test_gamma_limits_q12_y10(table10):
    ctx = modulus_context(12, table10)
    f = arithmetic_factors(1e-8, ctx, table10)
    assert f.gamma1_q == pytest.approx(0.5 * (3 * math.log(2) + 2 * math.log(3)), rel=1e-9)
    expect_g2 = -(3 * 5 * math.log(2) ** 2 + 2 * 4 * math.log(3) ** 2) / 12
    assert f.gamma2_q == pytest.approx(expect_g2, rel=1e-9)


def test_g_q_explicit_value(table10):
    ctx = modulus_context(6, table10)
    f = arithmetic_factors(1.0, ctx, table10)
    expect = ((1 - 1 / 2) / (1 - 2.0**-4)) * ((1 - 1 / 3) / (1 - 3.0**-3))
    assert f.g_q == pytest.approx(expect, rel=1e-13)
    assert f.f_q == pytest.approx((1 - 1 / 2) * (1 - 1 / 3), rel=1e-13)


def test_g_q_range_and_gamma_signs(table100):
    for q in (2, 6, 30, 210):
        ctx = modulus_context(q, table100)
        for s in (0.05, 0.3, 1.0, 3.0):
            f = arithmetic_factors(s, ctx, table100)
            assert 0 < f.g_q <= 1
            assert f.gamma1_q >= 0
            assert f.gamma2_q <= 0


def test_gamma_vs_finite_differences(table100):
    mp.mp.dps = 40
    ctx = modulus_context(30, table100)

    def log_g(s):
        tot = mp.mpf(0)
        for p in (2, 3, 5):
            nu = dict((pp, n) for pp, n, _ in table100.entries)[p]
            tot += mp.log((1 - mp.power(p, -s)) / (1 - mp.power(p, -(nu + 1) * s)))
        return tot

    s0 = mp.mpf("0.37")
    h = mp.mpf("1e-4")
    g1 = (log_g(s0 + h) - log_g(s0 - h)) / (2 * h)
    g2 = (log_g(s0 + h) - 2 * log_g(s0) + log_g(s0 - h)) / h**2
    f = arithmetic_factors(0.37, ctx, table100)
    assert abs(f.gamma1_q - float(g1)) <= 1e-5 * abs(float(g1))
    assert abs(f.gamma2_q - float(g2)) <= 1e-5 * abs(float(g2))


def test_h_d(table10):
    ctx = modulus_context(6, table10)
    f = arithmetic_factors(1.0, ctx, table10, d=6)
    expect = ((1 - 2.0**-3) / (1 - 2.0**-4)) * ((1 - 3.0**-2) / (1 - 3.0**-3))
    assert f.h_d == pytest.approx(expect, rel=1e-13)
    with pytest.raises(DomainError):
        arithmetic_factors(1.0, modulus_context(4, table10), table10, d=4)


# ---------------------------------------------------------------------------
# Gaussian factor
# ---------------------------------------------------------------------------

def test_G_at_zero():
    assert gaussian_G(0.0) == 0.5


def test_G_large_z_asymptote():
    z = 50.0
    expect = (1 / (math.sqrt(2 * math.pi) * z)) * (1 - 1 / z**2)
    assert gaussian_G(z) == pytest.approx(expect, rel=1e-5)


def test_G_decreasing_and_quadrature():
    # shift the tail integral: e^{z^2/2} Phi(z) = (2 pi)^{-1/2} *
    # integral_0^inf e^{-z s - s^2/2} ds, which quadrature handles at any z
    mp.mp.dps = 30
    zs = np.linspace(0, 50, 26)
    prev = math.inf
    for z in zs:
        g = gaussian_G(float(z))
        assert g < prev
        prev = g
        zm = mp.mpf(float(z))
        ref = float(mp.quad(lambda s: mp.exp(-zm * s - s * s / 2), [0, mp.inf])
                    / mp.sqrt(2 * mp.pi))
        assert abs(g - ref) <= 1e-12 * ref
    with pytest.raises(DomainError):
        gaussian_G(-11.0)
