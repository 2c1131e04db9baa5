"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Band constants come frozen (with 2x headroom) from
src/ultrafriable/data/calibrated_bands.txt; regenerate with
``ultrafriable calibrate``.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import random
from contextlib import contextmanager
from statistics import median

import mpmath as mp
import numpy as np

from ultrafriable import (
    N_q,
    build_table,
    count_friable,
    count_friable_progression,
    count_ultrafriable,
    count_ultrafriable_below,
    count_ultrafriable_residues,
    character_sum,
    compare,
    enumerate_characters,
    estimate_noncoprime,
    estimate_progression,
    estimate_t2,
    estimate_upsilon_q,
    gaussian_G,
    modulus_context,
    naive_oracle,
    phi_j_q,
    reconstruct_progression,
    solve_alpha,
    solve_beta,
    tau_N,
    t3_bound,
    xi,
)
from ultrafriable.calibration import load_constants

CONSTS = load_constants()


@contextmanager
def criterion(num: int, label: str):
    try:
        yield
    except Exception:
        print(f"CRITERION {num:2d}: FAIL — {label}")
        raise
    print(f"CRITERION {num:2d}: PASS — {label}")


# ---------------------------------------------------------------------------
# 1. oracle equality of the exact engines
# ---------------------------------------------------------------------------

def test_criterion_1_oracle_equality():
    rng = random.Random(0xF11A)
    y_palette = [2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 200]
    q_palette = [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 24, 30, 35, 49, 50]
    tuples = []
    while len(tuples) < 500:
        y = rng.choice(y_palette)
        q = rng.choice([q for q in q_palette
                        if all(y >= p for p in _prime_divisors(q))])
        x = int(math.exp(rng.uniform(math.log(10), math.log(10**6))))
        tuples.append((y, q, x))
    tuples.sort()  # group by (y, q) so engine caches stay warm

    with criterion(1, "exact engines equal the naive oracle on 500+ tuples"):
        checked = 0
        for y, q, x in tuples:
            table = build_table(y)
            ctx = modulus_context(q, table)
            assert count_ultrafriable(x, table, ctx) == \
                naive_oracle(x, y, q=q, mode="ultrafriable")
            assert count_friable(x, y, q) == naive_oracle(x, y, q=q, mode="friable")
            rc = count_ultrafriable_residues(x, table, q)
            for a in range(q):
                assert rc[a] == naive_oracle(x, y, a=a, q=q, mode="ultrafriable")
            a = rng.randrange(q)
            assert count_friable_progression(x, y, a, q) == \
                naive_oracle(x, y, a=a, q=q, mode="friable")
            checked += 1
        assert checked >= 500


def _prime_divisors(q):
    out, n, p = [], q, 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# 2. divisor symmetry
# ---------------------------------------------------------------------------

def test_criterion_2_symmetry():
    rng = random.Random(0x5E11)
    cases = 0
    with criterion(2, "divisor symmetry around sqrt(N), divisor-exact x included"):
        for y, q in [(10, 1), (20, 3), (30, 6), (40, 1), (50, 30), (60, 7),
                     (45, 4), (55, 21), (60, 30), (35, 2)]:
            table = build_table(y)
            ctx = modulus_context(q, table)
            N = N_q(table, ctx)
            tau = tau_N(table, ctx)
            sq = math.isqrt(N)
            xs = [sq, sq + 1, N - 1, N]
            for _ in range(8):
                xs.append(rng.randint(sq, N))
            # x placed exactly at divisors of N inside [sqrt(N), N]
            divs = _some_divisors(table, ctx, rng)
            xs.extend(d for d in divs if sq <= d <= N)
            for x in xs:
                if x * x < N:
                    continue
                lhs = count_ultrafriable(x, table, ctx) + \
                    count_ultrafriable_below(N, table, ctx, den=x)
                assert lhs == tau, (y, q, x)
                cases += 1
        assert cases >= 100


def _some_divisors(table, ctx, rng):
    pset = set(ctx.prime_divisors)
    out = []
    for _ in range(6):
        d = 1
        for p, nu, _ in table.entries:
            if p in pset:
                continue
            d *= p ** rng.randint(0, nu)
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# 3. orthogonality reconstruction
# ---------------------------------------------------------------------------

def test_criterion_3_orthogonality():
    with criterion(3, "character reconstruction matches exact counts to 1e-6"):
        for q in (3, 4, 5, 7, 8, 9, 12, 16, 21, 30):
            for x in (2520, 10**5):
                for y in (10, 50):
                    table = build_table(y)
                    rc = count_ultrafriable_residues(x, table, q)
                    for a in range(q):
                        if math.gcd(a, q) != 1:
                            continue
                        v = reconstruct_progression(x, table, a, q)
                        assert abs(v.real - rc[a]) <= 1e-6 * (1 + rc[a])
                        assert abs(v.imag) <= 1e-6 * (1 + rc[a])


# ---------------------------------------------------------------------------
# 4. saddle residuals and derivative oracle
# ---------------------------------------------------------------------------

def _logz_mp(s, table, q_primes=()):
    tot = mp.mpf(0)
    for p, nu, _ in table.entries:
        if p in q_primes:
            continue
        tot += mp.log((1 - mp.power(p, -(nu + 1) * s)) / (1 - mp.power(p, -s)))
    return tot


def test_criterion_4_saddle_grid():
    mp.mp.dps = 40
    ys = [int(v) for v in np.geomspace(30, 300, 20)]
    ts = np.linspace(0.13, 0.45, 10)
    q_cycle = [(1, ()), (6, (2, 3)), (30, (2, 3, 5))]
    points = 0
    with criterion(4, "beta/alpha residuals <= 1e-10 and sigma_j vs FD <= 1e-5 on 200 points"):
        for yi, y in enumerate(ys):
            table = build_table(y)
            for ti, t in enumerate(ts):
                lx = table.psi_y * float(t)
                assert lx > math.log(y), "grid point escaped the x >= y domain"
                x = math.exp(lx)
                res = solve_beta(x, table)
                assert res.residual <= 1e-10
                resa = solve_alpha(x, y)
                assert resa.residual <= 1e-10
                q, qp = q_cycle[(yi * len(ts) + ti) % 3]
                ctx = modulus_context(q, table) if q > 1 else None
                b = mp.mpf(res.sigma)
                h = mp.mpf("1e-4")
                f = [_logz_mp(b + k * h, table, qp) for k in (-2, -1, 0, 1, 2)]
                fd = {
                    2: (f[3] - 2 * f[2] + f[1]) / h**2,
                    3: -(f[4] - 2 * f[3] + 2 * f[1] - f[0]) / (2 * h**3),
                    4: (f[4] - 4 * f[3] + 6 * f[2] - 4 * f[1] + f[0]) / h**4,
                }
                for j in (2, 3, 4):
                    got = phi_j_q(j, res.sigma, table, ctx)
                    assert abs(got - float(fd[j])) <= 1e-5 * abs(float(fd[j]))
                points += 1
        assert points >= 200


# ---------------------------------------------------------------------------
# 5. special functions
# ---------------------------------------------------------------------------

def test_criterion_5_special_functions():
    mp.mp.dps = 30
    with criterion(5, "G quadrature 1e-12, xi residual 1e-12, xi asymptotic band"):
        assert gaussian_G(0.0) == 0.5
        for z in np.linspace(0.0, 50.0, 21):
            zm = mp.mpf(float(z))
            ref = float(mp.quad(lambda s: mp.exp(-zm * s - s * s / 2), [0, mp.inf])
                        / mp.sqrt(2 * mp.pi))
            assert abs(gaussian_G(float(z)) - ref) <= 1e-12 * ref
        for v in np.geomspace(1.0, 1e9, 40):
            v = float(v)
            z = xi(v)
            assert abs(math.exp(z) - 1 - v * z) <= 1e-12 * (1 + v * z)
        for v in np.geomspace(1e3, 1e9, 25):
            v = float(v)
            assert abs(xi(v) - math.log(v * math.log(v))) <= 1.0


# ---------------------------------------------------------------------------
# 6. Theorem 1 accuracy band
# ---------------------------------------------------------------------------

def test_criterion_6_t1_band():
    table = build_table(100)
    C = CONSTS["t1_band_C"]
    rel_q1 = {}
    with criterion(6, "T1 band holds with frozen C and the error shrinks in u (q=1)"):
        for lx in np.linspace(20.0, 40.0, 10):
            x = math.exp(float(lx))
            for q in (1, 6, 30):
                ctx = modulus_context(q, table)
                est = estimate_upsilon_q(x, table, ctx, "T1i")
                exact = count_ultrafriable(x, table, ctx)
                rec = compare(exact, est)
                assert abs(rec.rel_error) <= C * rec.budget, (lx, q)
                if q == 1:
                    rel_q1[round(float(lx))] = abs(rec.rel_error)
        assert rel_q1[40] < rel_q1[20]


# ---------------------------------------------------------------------------
# 7. Theorem 2 band
# ---------------------------------------------------------------------------

def test_criterion_7_t2_band():
    C = CONSTS["t2_band_C"]
    with criterion(7, "ultrafriable/friable gap within the frozen T2 band"):
        for y in (500, 1000, 2000):
            table = build_table(y)
            for q in (1, 2, 6, 15):
                ctx = modulus_context(q, table)
                est = estimate_t2(10**6, y, q)
                exact = count_ultrafriable(10**6, table, ctx)
                rec = compare(exact, est)
                assert abs(rec.rel_error) <= C * rec.budget, (y, q)


# ---------------------------------------------------------------------------
# 8. Theorem 4/5 equidistribution
# ---------------------------------------------------------------------------

def _devs(x, table, q):
    rc = count_ultrafriable_residues(x, table, q)
    uq = rc.coprime_total()
    phi = modulus_context(q, table).phi_q
    return [abs(rc[a] * phi / uq - 1.0) for a in range(q) if math.gcd(a, q) == 1]


def test_criterion_8_equidistribution():
    t100 = build_table(100)
    t1000 = build_table(1000)
    band = CONSTS["t4_dev_band"]
    C5 = CONSTS["t5_band_C"]
    with criterion(8, "T4 deviations within band and improving in x; T5 within budget"):
        for q in (3, 7, 11):
            devs = _devs(math.exp(30), t100, q)
            assert max(devs) <= band, q
            med20 = median(_devs(math.exp(20), t100, q))
            med40 = median(_devs(math.exp(40), t100, q))
            assert med40 <= med20, q
        for q in (3, 11, 31):
            ctx = modulus_context(q, t1000)
            est = estimate_progression(10**6, t1000, ctx, 1, "T5")
            dev = max(_devs(10**6, t1000, q))
            assert dev <= C5 * est.budget.stated_bound, q


# ---------------------------------------------------------------------------
# 9. non-coprime classes via h_d
# ---------------------------------------------------------------------------

def test_criterion_9_noncoprime():
    table = build_table(50)
    x = math.exp(25)
    band = CONSTS["r6_dev_band"]
    with criterion(9, "h_d estimate matches exact non-coprime counts within band"):
        for q, a in ((6, 2), (15, 5), (10, 4)):
            est = estimate_noncoprime(x, table, q, a)
            exact = count_ultrafriable_residues(x, table, q)[a]
            rec = compare(exact, est)
            assert abs(rec.rel_error) <= band, (q, a)


# ---------------------------------------------------------------------------
# 10. character-sum bound diagnostics
# ---------------------------------------------------------------------------

def test_criterion_10_t3():
    table = build_table(100)
    c1 = CONSTS["t3_c1"]
    with criterion(10, "character-sum ratios under the theta=1 ceiling and decaying in x"):
        decreasing = 0
        total = 0
        for q in (3, 5, 7, 8, 11):
            ctx = modulus_context(q, table)
            for chi in enumerate_characters(q):
                if chi.is_principal:
                    continue
                d30 = t3_bound(math.exp(30), table, ctx, chi, c1=c1)
                assert d30.exact_ratio <= d30.bound_theta1, (q, chi.exponents)
                r20 = abs(character_sum(math.exp(20), table, chi)) / \
                    count_ultrafriable(math.exp(20), table, ctx)
                r40 = abs(character_sum(math.exp(40), table, chi)) / \
                    count_ultrafriable(math.exp(40), table, ctx)
                total += 1
                if r40 < r20:
                    decreasing += 1
        assert decreasing >= 0.8 * total
