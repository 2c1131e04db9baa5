"""Main-term formulas and structured error budgets.

Each estimator returns an EstimateBreakdown whose main term is kept in
natural-log space (the counts can overflow any fixed-width float) together
with the named multiplicative factors and an ErrorBudget carrying the
theorem's error expression.  The asymptotic statements come with unnamed
absolute constants; those are exposed as keyword parameters with defaults,
and the acceptance suite pins empirical band constants around the budget
expressions (see calibration.py).

Reference factors at desk scale (the exact counts Upsilon_q, Psi_q and the
per-class counts) are taken from the exact engines rather than a second
level of asymptotics, which isolates the statement under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import counting as ct
from . import primes as pr
from . import saddle as sd
from .errors import DomainError, NonCoprimeError, RegimeError, UnsupportedCaseError

DEFAULT_EPSILON = 0.1
DEFAULT_C0 = 0.25
DEFAULT_C1 = 0.1
DEFAULT_C2 = 0.1
T1III_ETA_SQRT_U = 0.2

VARIANTS_UPSILON_Q = ("T1i", "T1ii", "T1iii", "REMC")
VARIANTS_PROGRESSION = ("T4", "T5")


def Y_eps(y: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """The quality threshold exp((log y)^{3/2 - eps})."""
    return math.exp(math.log(y) ** (1.5 - epsilon))


def L_eps(y: float, epsilon: float = DEFAULT_EPSILON) -> float:
    """The saddle-approximation threshold exp((log y)^{3/5 - eps})."""
    return math.exp(math.log(y) ** (0.6 - epsilon))


# ---------------------------------------------------------------------------
# error budgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ErrorBudget:
    """The quantities entering the theorem error terms for (x, y, q)."""

    u: float
    eta: float
    theta_q: float
    delta_q: float
    delta_q_alt: float  # the non-selected branch, for inspection
    dd_q: float  # min(omega(q), delta_q)
    cc_q: float  # min(omega(q), delta_q^2)
    stated_bound: float
    regime: pr.RegimeTag


def _delta_branch_small(lx: float, ly: float, theta: float, eta: float) -> float:
    # (log x)^theta / log y * (1 + 1/(theta log(1+eta)))
    if eta <= 0:
        return math.nan
    return lx**theta / ly * (1.0 + 1.0 / (theta * math.log1p(eta)))


def _delta_branch_large(u: float, theta: float) -> float:
    # theta (u log 2u)^theta / (1 + theta log 2u)
    if u <= 0:
        return math.nan
    l2u = math.log(2.0 * u)
    return theta * (u * l2u) ** theta / (1.0 + theta * l2u)


def error_budget(x: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext,
                 epsilon: float = DEFAULT_EPSILON, stated_bound: float = math.nan) -> ErrorBudget:
    """Delta_q, D_q, C_q and friends for (x, y, q).

    Branch rule: the two Delta_q expressions overlap around y = (log x)^2;
    the first (small-y) branch is selected iff psi(y) <= (log x)^2 and the
    saddle domain 2 log x < psi(y) holds; the other branch's value is kept
    alongside for inspection.
    """
    regime = pr.classify_regime(x, table, epsilon)
    lx = math.log(x)
    ly = math.log(table.y)
    u = regime.u
    eta = table.psi_y / lx - 2.0
    theta = ctx.theta_q
    b_small = _delta_branch_small(lx, ly, theta, eta)
    b_large = _delta_branch_large(u, theta)
    if regime.small_y and table.psi_y <= lx * lx:
        delta, alt = b_small, b_large
    else:
        delta, alt = b_large, b_small
    omega = ctx.omega_q
    return ErrorBudget(
        u=u,
        eta=eta,
        theta_q=theta,
        delta_q=delta,
        delta_q_alt=alt,
        dd_q=min(float(omega), delta) if delta == delta else float(omega),
        cc_q=min(float(omega), delta * delta) if delta == delta else float(omega),
        stated_bound=stated_bound,
        regime=regime,
    )


# ---------------------------------------------------------------------------
# estimate records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EstimateBreakdown:
    """A log-space main term with its multiplicative factors and budget."""

    theorem_tag: str
    log_main: float
    factors: dict[str, float]
    budget: ErrorBudget
    beta: float | None = None
    sigma2: float | None = None
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def main(self) -> float:
        return math.exp(self.log_main)


@dataclass(frozen=True)
class ComparisonRecord:
    """Exact count vs estimate, with the error measured against the budget."""

    exact: int
    log_exact: float
    log_main: float
    rel_error: float  # (exact - main) / exact, in log space
    budget: float
    error_over_budget: float
    degenerate: bool = False


def compare(exact: int, est: EstimateBreakdown) -> ComparisonRecord:
    """Relative error of an estimate against an exact count, in log space."""
    if exact <= 0:
        return ComparisonRecord(
            exact=exact, log_exact=math.nan, log_main=est.log_main,
            rel_error=math.nan, budget=est.budget.stated_bound,
            error_over_budget=math.nan, degenerate=True,
        )
    log_exact = math.log(exact)
    rel = -math.expm1(est.log_main - log_exact)  # 1 - main/exact
    bud = est.budget.stated_bound
    return ComparisonRecord(
        exact=exact,
        log_exact=log_exact,
        log_main=est.log_main,
        rel_error=rel,
        budget=bud,
        error_over_budget=abs(rel) / bud if bud and bud == bud else math.nan,
    )


# ---------------------------------------------------------------------------
# Upsilon estimates (small-y saddle main terms)
# ---------------------------------------------------------------------------

def _require_small_y(regime: pr.RegimeTag, what: str):
    if not regime.small_y:
        raise RegimeError(f"{what} needs the saddle domain psi(y) > 2 log x")


def _require_large_y(regime: pr.RegimeTag, what: str):
    if not regime.large_y:
        raise RegimeError(f"{what} needs y >= (log x)^(2+eps)")


def estimate_upsilon(x: float, table: pr.PrimePowerTable,
                     epsilon: float = DEFAULT_EPSILON) -> EstimateBreakdown:
    """Saddle main term for the global count: x^beta Z(beta, y) G(beta sqrt(sigma2)).

    Requires the saddle domain psi(y) > 2 log x; the upper regime bound
    psi(y) << (log x)^3 is recorded as a flag, not enforced.
    """
    ctx1 = pr.modulus_context(1, table)
    bud = error_budget(x, table, ctx1, epsilon)
    _require_small_y(bud.regime, "the global saddle estimate")
    lx = math.log(x)
    res = sd.beta_cached(lx, table.y)
    beta, s2 = res.sigma, res.sigma_j[2]
    log_z = sd.log_Z_q(beta, table)
    log_g = math.log(sd.gaussian_G(beta * math.sqrt(s2)))
    bud = error_budget(x, table, ctx1, epsilon, stated_bound=1.0 / bud.u)
    factors = {
        "x_pow_beta": beta * lx,
        "Z_q_beta": log_z,
        "G_factor": log_g,
        "g_q_beta": 0.0,
        "correction_T1iii": 0.0,
    }
    return EstimateBreakdown(
        theorem_tag="T1i",
        log_main=beta * lx + log_z + log_g,
        factors=factors,
        budget=bud,
        beta=beta,
        sigma2=s2,
        flags={"psi_below_cube": table.psi_y <= lx**3},
    )


def estimate_upsilon_q(x: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext,
                       variant: str = "T1i", epsilon: float = DEFAULT_EPSILON,
                       eta_sqrt_u_max: float = T1III_ETA_SQRT_U) -> EstimateBreakdown:
    """Saddle main term for the coprime count, x^beta Z_q(beta, y) G(beta sqrt(sigma2)).

    Variants select the error budget:
      T1i   -- (1+D_q^2)/u + D_q(1+eta)/(sqrt(u)+eta u);
      T1ii  -- needs eta <= 1/2; omega(1+eta)/(sqrt(u)+eta u) + (1+omega^2)/u;
      T1iii -- needs eta sqrt(u) small; the main term gains the explicit
               correction (1 + omega/sqrt(pi u)), budget
               eta*omega + log q/(sqrt(u) log y) + omega^2/u;
      REMC  -- the same main term in the complementary large-y domain,
               budget q u log 2u/(phi(q) sqrt(y) log y) + 1/u.
    """
    if variant not in VARIANTS_UPSILON_Q:
        raise DomainError(f"unknown variant {variant!r}")
    ctx.require_p_plus_le_y()
    bud0 = error_budget(x, table, pr.modulus_context(1, table), epsilon)
    lx = math.log(x)
    ly = math.log(table.y)
    u, eta = bud0.u, bud0.eta
    omega = ctx.omega_q

    if variant == "REMC":
        _require_large_y(bud0.regime, "REMC")
    else:
        _require_small_y(bud0.regime, variant)
    if variant == "T1ii" and eta > 0.5:
        raise DomainError(f"T1ii needs eta <= 1/2, got eta={eta:.4g}")
    if variant == "T1iii" and eta * math.sqrt(u) >= eta_sqrt_u_max:
        raise DomainError(
            f"T1iii needs eta*sqrt(u) < {eta_sqrt_u_max}, got {eta * math.sqrt(u):.4g}"
        )

    res = sd.beta_cached(lx, table.y)
    beta, s2 = res.sigma, res.sigma_j[2]
    log_zq = sd.log_Z_q(beta, table, ctx)
    log_g = math.log(sd.gaussian_G(beta * math.sqrt(s2)))
    gq = sd.arithmetic_factors(beta, ctx, table).g_q

    bud = error_budget(x, table, ctx, epsilon)
    dq = bud.dd_q
    if variant == "T1i":
        stated = (1.0 + dq * dq) / u + dq * (1.0 + eta) / (math.sqrt(u) + eta * u)
    elif variant == "T1ii":
        stated = omega * (1.0 + eta) / (math.sqrt(u) + eta * u) + (1.0 + omega * omega) / u
    elif variant == "T1iii":
        stated = eta * omega + math.log(ctx.q) / (math.sqrt(u) * ly) + omega * omega / u
    else:  # REMC
        stated = (ctx.q * u * math.log(2.0 * u)) / (ctx.phi_q * math.sqrt(table.y) * ly) + 1.0 / u
    bud = error_budget(x, table, ctx, epsilon, stated_bound=stated)

    correction = math.log1p(omega / math.sqrt(math.pi * u)) if variant == "T1iii" else 0.0
    factors = {
        "x_pow_beta": beta * lx,
        "Z_q_beta": log_zq,
        "G_factor": log_g,
        "g_q_beta": math.log(gq),
        "correction_T1iii": correction,
    }
    flags = {"omega_small_vs_sqrt_y": omega <= math.sqrt(table.y) / ly}
    return EstimateBreakdown(
        theorem_tag=variant,
        log_main=beta * lx + log_zq + log_g + correction,
        factors=factors,
        budget=bud,
        beta=beta,
        sigma2=s2,
        flags=flags,
    )


def estimate_t2(x: float, y: int, q: int, epsilon: float = DEFAULT_EPSILON) -> EstimateBreakdown:
    """Large-y estimate of Upsilon_q by the exact friable count Psi_q.

    stated_bound = q u log 2u / (phi(q) sqrt(y) log y).  The friable count is
    exact (desk scale), so the record isolates the ultrafriable/friable gap.
    """
    table = pr.build_table(y)
    ctx = pr.modulus_context(q, table)
    ctx.require_p_plus_le_y()
    regime = pr.classify_regime(x, table, epsilon)
    _require_large_y(regime, "T2")
    u = regime.u
    psi_q_exact = ct.count_friable(x, y, q)
    stated = q * u * math.log(2.0 * u) / (ctx.phi_q * math.sqrt(y) * math.log(y))
    bud = error_budget(x, table, ctx, epsilon, stated_bound=stated)
    return EstimateBreakdown(
        theorem_tag="T2",
        log_main=math.log(psi_q_exact),
        factors={"psi_q_exact": float(psi_q_exact)},
        budget=bud,
        flags={"omega_small_vs_sqrt_y": ctx.omega_q <= math.sqrt(y)},
    )


def estimate_progression(x: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext,
                         a: int, variant: str = "T4",
                         epsilon: float = DEFAULT_EPSILON, c0: float = DEFAULT_C0,
                         c1: float = DEFAULT_C1, c2: float = DEFAULT_C2) -> EstimateBreakdown:
    """Equidistribution main term Upsilon_q(x, y) / phi(q) for a coprime class.

    T4 (small y): budget exp(-c1 u/(log u)^4) + 1/Y_eps, with the domain
    condition q <= y^(c0/log log y) recorded as a flag (it is vacuous at
    desk scale).  T5 (large y): budget log q/(u^c2 log y) + 1/log y, with
    q <= sqrt(y) flagged likewise.
    """
    if variant not in VARIANTS_PROGRESSION:
        raise DomainError(f"unknown variant {variant!r}")
    if math.gcd(a, ctx.q) != 1:
        raise NonCoprimeError(
            f"(a, q) = {math.gcd(a, ctx.q)} > 1: use estimate_noncoprime for this class"
        )
    ctx.require_p_plus_le_y()
    regime = pr.classify_regime(x, table, epsilon)
    u = regime.u
    y = table.y
    if variant == "T4":
        _require_small_y(regime, "T4")
        lu = math.log(max(u, 1.0 + 1e-12))
        stated = math.exp(-c1 * u / lu**4) + 1.0 / Y_eps(y, epsilon)
        q_ok = ctx.q <= y ** (c0 / math.log(math.log(y)))
    else:
        _require_large_y(regime, "T5")
        stated = math.log(ctx.q) / (u**c2 * math.log(y)) + 1.0 / math.log(y)
        q_ok = ctx.q <= math.sqrt(y)
    upsilon_q = ct.count_ultrafriable(x, table, ctx)
    bud = error_budget(x, table, ctx, epsilon, stated_bound=stated)
    beta = s2 = None
    if regime.small_y:
        res = sd.beta_cached(math.log(x), y)
        beta, s2 = res.sigma, res.sigma_j[2]
    return EstimateBreakdown(
        theorem_tag=variant,
        log_main=math.log(upsilon_q) - math.log(ctx.phi_q),
        factors={"upsilon_q_exact": float(upsilon_q), "phi_q": float(ctx.phi_q)},
        budget=bud,
        beta=beta,
        sigma2=s2,
        flags={"q_in_theorem_range": bool(q_ok)},
    )


def estimate_noncoprime(x: float, table: pr.PrimePowerTable, q: int, a: int,
                        epsilon: float = DEFAULT_EPSILON, c0: float = DEFAULT_C0,
                        c1: float = DEFAULT_C1) -> EstimateBreakdown:
    """Progression estimate for d = (a, q) > 1 in the supported split case.

    Needs d squarefree, (q/d, d) = 1 and d itself y-ultrafriable and <= x;
    the main term is h_d(beta) Upsilon_{q/d}(x/d, y) / phi(q/d) with the
    T4-style budget.  The saddle is solved for the reduced problem (x/d, y):
    writing n = d*m turns the count into one over m <= x/d with a modified
    series Z_{q/d} * h_d, so x/d is where its saddle lives (asymptotically
    interchangeable with the saddle at x, but defined on a slightly larger
    domain).
    """
    d = math.gcd(a, q)
    dfac = pr.factorize(d)
    if any(e > 1 for e in dfac.values()):
        raise UnsupportedCaseError(f"d=(a,q)={d} is not squarefree; case not treated")
    if math.gcd(q // d, d) != 1:
        raise UnsupportedCaseError(f"(q/d, d) = {math.gcd(q // d, d)} > 1; case not treated")
    if any(p > table.y for p in dfac) or d > x:
        raise UnsupportedCaseError(f"d={d} is not a y-ultrafriable integer <= x")
    regime = pr.classify_regime(x / d, table, epsilon)
    _require_small_y(regime, "the non-coprime estimate")
    res = sd.beta_cached(math.log(x) - math.log(d), table.y)
    beta = res.sigma
    ctx_d = pr.modulus_context(d, table)
    h_d = sd.arithmetic_factors(beta, ctx_d, table, d=d).h_d
    qd = q // d
    ctx_qd = pr.modulus_context(qd, table)
    ctx_qd.require_p_plus_le_y()
    ups = ct.count_ultrafriable(ct._floor_bound(x) // d, table, ctx_qd)
    u = regime.u
    lu = math.log(max(u, 1.0 + 1e-12))
    stated = math.exp(-c1 * u / lu**4) + 1.0 / Y_eps(table.y, epsilon)
    bud = error_budget(x, table, pr.modulus_context(q, table), epsilon, stated_bound=stated)
    return EstimateBreakdown(
        theorem_tag="R6",
        log_main=math.log(h_d) + math.log(ups) - math.log(ctx_qd.phi_q),
        factors={"h_d": h_d, "upsilon_qd_exact": float(ups), "phi_qd": float(ctx_qd.phi_q)},
        budget=bud,
        beta=beta,
        sigma2=res.sigma_j[2],
        flags={"d": True},
    )


# ---------------------------------------------------------------------------
# character-sum bound diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class T3Diagnostic:
    """Both versions of the character-sum bound next to the exact ratio.

    theta = 1 models a possible exceptional real character (never detected
    here -- the artifact fixes theta = 0 and reports both right sides).
    """

    bound_theta0: float
    bound_theta1: float
    exact_ratio: float
    u: float


def t3_bound(x: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext, chi,
             epsilon: float = DEFAULT_EPSILON, c1: float = DEFAULT_C1) -> T3Diagnostic:
    """Evaluate the nonprincipal character-sum bound for theta in {0, 1}.

    Pairs exp(-c1 u / (1 + theta (log u)^4)) + 1/Y_eps with the exact ratio
    |sum chi(n)| / Upsilon_q from the residue vector.
    """
    if chi.is_principal:
        raise DomainError("the character-sum bound concerns nonprincipal characters")
    regime = pr.classify_regime(x, table, epsilon)
    _require_small_y(regime, "the character-sum bound")
    u = regime.u
    lu4 = math.log(max(u, 1.0 + 1e-12)) ** 4
    inv_y = 1.0 / Y_eps(table.y, epsilon)
    b0 = math.exp(-c1 * u) + inv_y
    b1 = math.exp(-c1 * u / (1.0 + lu4)) + inv_y
    s = ct.character_sum(x, table, chi)
    ctx.require_p_plus_le_y()
    uq = ct.count_ultrafriable(x, table, ctx)
    return T3Diagnostic(bound_theta0=b0, bound_theta1=b1,
                        exact_ratio=abs(s) / uq, u=u)
