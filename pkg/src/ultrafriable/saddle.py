"""Saddle points, Dirichlet-series derivatives and arithmetic factors.

The generating series of the ultrafriable integers coprime to q is the
finite Euler product

    Z_q(s, y) = prod_{p<=y, p∤q} (1 - p^{-(nu_p+1)s}) / (1 - p^{-s}),

and its negated logarithmic derivative

    phi_1(s, y) = sum_p { log p/(p^s - 1) - (nu_p+1) log p/(p^{(nu_p+1)s} - 1) }

is strictly decreasing from psi(y)/2 at 0+ to 0, so the saddle equation
phi_1(beta, y) = log x has a unique root whenever psi(y) > 2 log x.  The
friable analogue alpha solves sum_p log p/(p^alpha - 1) = log x.

Numerics: each summand is a difference of two terms that both blow up
like 1/s as s -> 0 while the difference stays bounded, so below a
crossover the code switches to a pole-free Bernoulli expansion of
w/(e^w - 1).  The same expansion drives the higher log-derivatives
phi_j; their double series over (p, k) is summed in closed form per
prime (geometric k-sums), which equals the fully converged series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import erfcx

from . import primes as pr
from .errors import DomainError, RegimeError

RESIDUAL_TOL = 1e-10
_SERIES_CUT = 0.5  # use the Bernoulli expansion when (nu+1) * s * log p <= this

# w/(e^w - 1) = 1 - w/2 + sum B_{2m} w^{2m}/(2m)!  ==>
# M_1(w) := 1/(e^w - 1) = 1/w - 1/2 + sum a_m w^{2m-1}
_M1_TERMS: list[tuple[int, Fraction]] = [
    (0, Fraction(-1, 2)),
    (1, Fraction(1, 12)),
    (3, Fraction(-1, 720)),
    (5, Fraction(1, 30240)),
    (7, Fraction(-1, 1209600)),
    (9, Fraction(1, 47900160)),
    (11, Fraction(-691, 1307674368000)),
]


def _dj_coeffs(j: int) -> list[tuple[int, float, int]]:
    """Series data for D_j(w, m) = M_j(w) - m^j M_j(m w), m = nu_p + 1.

    M_j = (-d/dw)^{j-1} M_1; the 1/w^j poles cancel exactly in D_j, and a
    term a*w^e of M_1 contributes  a * (-1)^{j-1} e(e-1)...(e-j+2) *
    w^{e-j+1} * (1 - m^{e+1}).
    """
    out = []
    for e, a in _M1_TERMS:
        fall = 1
        for t in range(j - 1):
            fall *= e - t
        if fall == 0:
            continue
        c = float(a * fall * (-1) ** (j - 1))
        out.append((e - j + 1, c, e + 1))
    return out


_DJ = {j: _dj_coeffs(j) for j in (1, 2, 3, 4)}


def _mj_closed(j: int, w: np.ndarray) -> np.ndarray:
    """M_j(w) = sum_{k>=1} k^{j-1} e^{-kw}, via the geometric closed forms."""
    t = np.exp(-w)
    om = -np.expm1(-w)  # 1 - e^{-w}
    if j == 1:
        return t / om
    if j == 2:
        return t / om**2
    if j == 3:
        return t * (1.0 + t) / om**3
    if j == 4:
        return t * (1.0 + 4.0 * t + t * t) / om**4
    raise DomainError(f"j={j} outside the implemented range 1..4")


def _dj(j: int, w: np.ndarray, m: np.ndarray) -> np.ndarray:
    """D_j(w, m) = M_j(w) - m^j M_j(m w), stable down to w -> 0."""
    W = m * w
    small = W <= _SERIES_CUT
    out = np.empty_like(w)
    if np.any(small):
        ws, ms = w[small], m[small]
        acc = np.zeros_like(ws)
        for pw, c, me in _DJ[j]:
            acc += c * ws**pw * (1.0 - ms**me)
        out[small] = acc
    if not np.all(small):
        big = ~small
        wb, mb = w[big], m[big]
        out[big] = _mj_closed(j, wb) - mb**j * _mj_closed(j, mb * wb)
    return out


def _table_arrays(table: pr.PrimePowerTable, ctx: pr.ModulusContext | None):
    if ctx is None or not ctx.prime_divisors:
        return table.logp_arr, table.nu_arr.astype(np.float64)
    mask = table.mask_coprime(ctx.prime_divisors)
    return table.logp_arr[mask], table.nu_arr[mask].astype(np.float64)


# ---------------------------------------------------------------------------
# phi_1 (closed form) and phi_j (summed double series)
# ---------------------------------------------------------------------------

def phi1(sigma: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext | None = None) -> float:
    """Closed-form phi_1: sum of t/(e^{w}-1) - (nu+1)t/(e^{(nu+1)w}-1), w = sigma t.

    Guarded against the 1/sigma cancellation by the Bernoulli expansion
    when (nu+1) * sigma * log p is small.
    """
    if sigma <= 0:
        raise DomainError(f"need sigma > 0, got {sigma}")
    t, nu = _table_arrays(table, ctx)
    w = sigma * t
    m = nu + 1.0
    W = m * w
    small = W <= _SERIES_CUT
    terms = np.empty_like(w)
    if np.any(small):
        ws, ms = w[small], m[small]
        # nu/2 - ((nu+1)^2-1) w/12 + ((nu+1)^4-1) w^3/720 - ... (poles cancel)
        acc = (ms - 1.0) / 2.0
        acc -= (ms**2 - 1.0) * ws / 12.0
        acc += (ms**4 - 1.0) * ws**3 / 720.0
        acc -= (ms**6 - 1.0) * ws**5 / 30240.0
        acc += (ms**8 - 1.0) * ws**7 / 1209600.0
        acc -= (ms**10 - 1.0) * ws**9 / 47900160.0
        acc += (ms**12 - 1.0) * ws**11 * 691.0 / 1307674368000.0
        terms[small] = acc
    if not np.all(small):
        big = ~small
        wb, mb = w[big], m[big]
        terms[big] = 1.0 / np.expm1(wb) - mb / np.expm1(mb * wb)
    return float(np.dot(t, terms))


def phi1_limit_at_zero(table: pr.PrimePowerTable, ctx: pr.ModulusContext | None = None) -> float:
    """phi_1(0+, y) = psi_q(y) / 2."""
    t, nu = _table_arrays(table, ctx)
    return float(np.dot(t, nu) / 2.0)


def phi_j_q(j: int, s: float, table: pr.PrimePowerTable,
            ctx: pr.ModulusContext | None = None) -> float:
    """phi_{j,q}(s, y): the j-th saddle derivative of log Z_q, j = 1..4.

    Computed from the absolutely convergent double series
    sum_{p, k} k^{j-1} (log p)^j [p^{-ks} - (nu_p+1)^j p^{-(nu_p+1)ks}],
    with the k-sums carried out in closed form (so the truncation error is
    zero) and a pole-cancelling expansion near s log p = 0.
    """
    if not 1 <= j <= 4:
        raise DomainError(f"need 1 <= j <= 4, got {j}")
    if s <= 0:
        raise DomainError(f"need s > 0, got {s}")
    t, nu = _table_arrays(table, ctx)
    w = s * t
    m = nu + 1.0
    return float(np.dot(t**j, _dj(j, w, m)))


def log_Z_q(s, table: pr.PrimePowerTable, ctx: pr.ModulusContext | None = None):
    """log Z_q(s, y) with principal-branch logs; real and positive for real s."""
    if isinstance(s, complex):
        if s.real <= 0:
            raise DomainError(f"need Re s > 0, got {s}")
        t, nu = _table_arrays(table, ctx)
        tc = t.astype(np.complex128)
        w = s * tc
        W = (nu + 1.0) * w
        return complex(np.sum(np.log1p(-np.exp(-W)) - np.log1p(-np.exp(-w))))
    if s <= 0:
        raise DomainError(f"need Re s > 0, got {s}")
    t, nu = _table_arrays(table, ctx)
    w = s * t
    W = (nu + 1.0) * w
    # log(1 - e^{-w}) = log(-expm1(-w)); each Euler factor is >= 1
    return float(np.sum(np.log(-np.expm1(-W)) - np.log(-np.expm1(-w))))


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SaddleResult:
    """A solved saddle point with its self-certifying residual."""

    kind: str  # "ALPHA" or "BETA"
    sigma: float
    residual: float  # |equation mismatch| / log x
    sigma_j: dict[int, float] = field(default_factory=dict)
    iterations: int = 0


def _solve_decreasing(f, fprime, target: float, tol: float):
    """Root of the strictly decreasing f(sigma) = target on (0, inf).

    Brackets by doubling/halving, bisects to a short interval, then runs
    guarded Newton (fprime < 0), falling back to bisection when a step
    leaves the bracket.  Returns (sigma, residual, iterations).
    """
    lo = hi = 1.0
    it = 0
    while f(hi) > target:
        lo = hi
        hi *= 2.0
        it += 1
        if hi > 2.0**200:
            raise DomainError("no saddle bracket found (target too small)")
    while f(lo) <= target:
        hi = lo
        lo /= 2.0
        it += 1
        if lo < 2.0**-200:
            raise DomainError("no saddle bracket found (target too large)")
    # now f(lo) > target >= f(hi)
    for _ in range(40):
        if hi - lo <= 1e-3 * lo:
            break
        mid = 0.5 * (lo + hi)
        it += 1
        if f(mid) > target:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    fx = f(x)
    it += 1
    for _ in range(60):
        if abs(fx - target) <= tol:
            break
        step = (fx - target) / fprime(x)  # fprime < 0
        xn = x - step
        if not lo < xn < hi:
            xn = 0.5 * (lo + hi)
        fxn = f(xn)
        it += 1
        if fxn > target:
            lo = xn
        else:
            hi = xn
        x, fx = xn, fxn
    return x, fx, it


def solve_beta(x: float, table: pr.PrimePowerTable) -> SaddleResult:
    """Solve phi_1(beta, y) = log x in the small-y regime psi(y) > 2 log x.

    The result carries sigma_j = phi_j(beta, y) for j = 2, 3, 4 (modulus 1)
    and a residual certified against log x.
    """
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")
    lx = math.log(x)
    if table.psi_y <= 2.0 * lx:
        raise RegimeError(
            f"psi({table.y})={table.psi_y:.6g} <= 2 log x={2*lx:.6g}: the saddle "
            "equation has no root; apply the divisor-symmetry identity instead",
            phi1_limit=table.psi_y / 2.0,
        )
    f = lambda s: phi1(s, table)
    fp = lambda s: -phi_j_q(2, s, table)
    tol = 1e-13 * max(1.0, lx)
    beta, fb, it = _solve_decreasing(f, fp, lx, tol)
    return SaddleResult(
        kind="BETA",
        sigma=beta,
        residual=abs(fb - lx) / lx,
        sigma_j={j: phi_j_q(j, beta, table) for j in (2, 3, 4)},
        iterations=it,
    )


def _alpha_sum(sigma: float, table: pr.PrimePowerTable) -> float:
    w = sigma * table.logp_arr
    return float(np.dot(table.logp_arr, 1.0 / np.expm1(w)))


def _alpha_sum_deriv(sigma: float, table: pr.PrimePowerTable) -> float:
    t = table.logp_arr
    return -float(np.dot(t * t, _mj_closed(2, sigma * t)))


def solve_alpha(x: float, y: int) -> SaddleResult:
    """Solve sum_{p<=y} log p / (p^alpha - 1) = log x for the friable saddle."""
    if y < 2:
        raise DomainError(f"need y >= 2, got {y}")
    if x < y:
        raise DomainError(f"need x >= y, got x={x}, y={y}")
    table = pr.build_table(y)
    lx = math.log(x)
    tol = 1e-13 * max(1.0, lx)
    alpha, fa, it = _solve_decreasing(
        lambda s: _alpha_sum(s, table), lambda s: _alpha_sum_deriv(s, table), lx, tol
    )
    return SaddleResult(kind="ALPHA", sigma=alpha, residual=abs(fa - lx) / lx, iterations=it)


@lru_cache(maxsize=256)
def beta_cached(log_x: float, y: int) -> SaddleResult:
    """Memoised solve_beta keyed on (log x, y)."""
    return solve_beta(math.exp(log_x), pr.build_table(y))


# ---------------------------------------------------------------------------
# xi(v): e^xi = 1 + v xi
# ---------------------------------------------------------------------------

def xi(v: float) -> float:
    """The positive solution of e^xi = 1 + v*xi for v > 1, with xi(1) = 0.

    Asymptotically xi(v) ~ log(v log v); the bracket below is built from
    that and then sharpened by bisection + Newton.
    """
    if v < 1:
        raise DomainError(f"need v >= 1, got {v}")
    if v == 1:
        return 0.0
    f = lambda z: math.exp(z) - 1.0 - v * z
    lo = max(1e-300, math.log(v))
    hi = math.log(v * (1.0 + math.log(v)) ** 2) + 1.0
    while f(lo) >= 0.0:
        lo *= 0.5
    while f(hi) <= 0.0:
        hi += 1.0
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(60):
        fz = f(z)
        if abs(fz) <= 1e-14 * (1.0 + v * z):
            break
        d = math.exp(z) - v
        zn = z - fz / d if d != 0 else 0.5 * (lo + hi)
        if not lo <= zn <= hi:
            zn = 0.5 * (lo + hi)
        if f(zn) < 0.0:
            lo = zn
        else:
            hi = zn
        z = zn
    return z


# ---------------------------------------------------------------------------
# Gaussian factor and arithmetic factors
# ---------------------------------------------------------------------------

def gaussian_G(z: float) -> float:
    """G(z) = e^{z^2/2} * (upper Gaussian tail at z).

    Evaluated through the scaled complementary error function, so there is
    no overflow for large z:  G(z) = erfcx(z / sqrt(2)) / 2.
    """
    if z < -10.0:
        raise DomainError(f"G evaluated outside the supported range z >= -10: {z}")
    return 0.5 * float(erfcx(z / math.sqrt(2.0)))


@dataclass(frozen=True)
class ArithmeticFactors:
    """Euler-product correction factors at a real point s > 0.

    For real s > 0 each factor of g_q lies in (0, 1], so g_q in (0, 1];
    gamma1_q = (log g_q)'(s) >= 0 and gamma2_q = (log g_q)''(s) <= 0.
    """

    s: float
    g_q: float
    f_q: float
    gamma1_q: float
    gamma2_q: float
    h_d: float | None = None


_GAMMA_CROSSOVER = 1e-6  # use the s -> 0 limits below s * log y < this


def arithmetic_factors(s: float, ctx: pr.ModulusContext, table: pr.PrimePowerTable,
                       d: int | None = None) -> ArithmeticFactors:
    """g_q, f_q, gamma_q', gamma_q'' (and h_d for a squarefree divisor d | q)."""
    if s <= 0:
        raise DomainError(f"need s > 0, got {s}")
    ctx.require_p_plus_le_y()
    ps = np.array(ctx.prime_divisors, dtype=np.float64)
    nus = np.array(ctx.nu_divisors, dtype=np.float64)
    if len(ps) == 0:
        g = f = 1.0
        g1 = g2 = 0.0
    else:
        t = np.log(ps)
        w = s * t
        W = (nus + 1.0) * w
        g = float(np.prod(np.expm1(-w) / np.expm1(-W)))
        f = float(np.prod(-np.expm1(-w)))
        if s * math.log(table.y) < _GAMMA_CROSSOVER:
            g1 = 0.5 * float(np.dot(nus, t))
            g2 = -float(np.dot(nus * (nus + 2.0), t * t)) / 12.0
        else:
            m = nus + 1.0
            g1 = float(np.dot(t, _dj(1, w, m)))
            g2 = -float(np.dot(t * t, _dj(2, w, m)))
    h = None
    if d is not None:
        dfac = pr.factorize(d)
        if any(e > 1 for e in dfac.values()):
            raise DomainError(f"h_d needs squarefree d, got d={d}")
        dp = np.array(sorted(dfac), dtype=np.float64)
        dnu = np.array([table.nu_of(int(p)) for p in sorted(dfac)], dtype=np.float64)
        if np.any(dnu == 0):
            raise DomainError(f"h_d needs P+(d) <= y, got d={d}, y={table.y}")
        t = np.log(dp)
        h = float(np.prod(np.expm1(-dnu * s * t) / np.expm1(-(dnu + 1.0) * s * t)))
    return ArithmeticFactors(s=s, g_q=g, f_q=f, gamma1_q=g1, gamma2_q=g2, h_d=h)
