"""Prime-power tables, modulus contexts and regime classification.

Everything downstream (exact counting, Dirichlet series, estimators) is a
function of the primes p <= y together with the largest exponent nu_p such
that p^nu_p <= y.  The exponents are found by exact integer multiplication,
never by floating ``log y / log p``, so boundary cases like y = p^k are
handled correctly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError

DEFAULT_Y_BUDGET = 10**8


def sieve_primes(n: int) -> np.ndarray:
    """All primes <= n, ascending, as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


@lru_cache(maxsize=None)
def _small_primes(n: int) -> tuple[int, ...]:
    return tuple(int(p) for p in sieve_primes(n))


def nth_prime(k: int) -> int:
    """The k-th prime (1-indexed), with the convention that k=0 gives 2."""
    if k <= 0:
        return 2
    # p_k < k (log k + log log k) for k >= 6; pad generously for small k.
    bound = 15 if k < 6 else int(k * (math.log(k) + math.log(math.log(k)))) + 10
    primes = _small_primes(bound)
    while len(primes) < k:
        bound *= 2
        primes = _small_primes(bound)
    return primes[k - 1]


@dataclass(frozen=True)
class PrimePowerTable:
    """Primes p <= y with their maximal exponents nu_p (p^nu_p <= y).

    ``psi_y`` is the Chebyshev function value sum(nu_p * log p) in natural
    logs; exp(psi_y) is the modulus-free product N of maximal prime powers,
    whose divisors are exactly the y-ultrafriable integers.
    """

    y: int
    primes: tuple[int, ...]
    nu: tuple[int, ...]
    max_powers: tuple[int, ...]
    psi_y: float
    # numpy views used by the vectorised numeric code
    p_arr: np.ndarray = field(repr=False)
    nu_arr: np.ndarray = field(repr=False)
    logp_arr: np.ndarray = field(repr=False)

    @property
    def entries(self) -> list[tuple[int, int, float]]:
        """Ascending list of (p, nu_p, log p)."""
        return [(p, n, lp) for p, n, lp in zip(self.primes, self.nu, self.logp_arr)]

    def nu_of(self, p: int) -> int:
        """nu_p for a prime p <= y, 0 if p > y."""
        i = np.searchsorted(self.p_arr, p)
        if i < len(self.primes) and self.primes[i] == p:
            return self.nu[i]
        return 0

    def mask_coprime(self, prime_divisors) -> np.ndarray:
        """Boolean mask over table entries selecting p not dividing q."""
        if not prime_divisors:
            return np.ones(len(self.primes), dtype=bool)
        return ~np.isin(self.p_arr, np.asarray(list(prime_divisors), dtype=np.int64))


@lru_cache(maxsize=64)
def build_table(y: int, budget: int = DEFAULT_Y_BUDGET) -> PrimePowerTable:
    """Sieve primes up to y and compute the maximal exponents nu_p.

    Raises DomainError for y < 2 and ResourceError for y beyond the memory
    budget (default 10^8).
    """
    if y < 2:
        raise DomainError(f"need y >= 2, got {y}")
    if y > budget:
        raise ResourceError(f"y={y} exceeds the configured budget {budget}")
    ps = sieve_primes(y)
    primes, nus, powers = [], [], []
    for p in ps.tolist():
        nu, pw = 1, p
        while pw * p <= y:
            pw *= p
            nu += 1
        primes.append(p)
        nus.append(nu)
        powers.append(pw)
    p_arr = np.array(primes, dtype=np.int64)
    nu_arr = np.array(nus, dtype=np.int64)
    logp_arr = np.log(p_arr.astype(np.float64))
    psi_y = float(np.dot(nu_arr.astype(np.float64), logp_arr))
    for arr in (p_arr, nu_arr, logp_arr):
        arr.flags.writeable = False
    return PrimePowerTable(
        y=y,
        primes=tuple(primes),
        nu=tuple(nus),
        max_powers=tuple(powers),
        psi_y=psi_y,
        p_arr=p_arr,
        nu_arr=nu_arr,
        logp_arr=logp_arr,
    )


def factorize(q: int) -> dict[int, int]:
    """Prime factorisation of q >= 1 by trial division."""
    if q < 1:
        raise DomainError(f"need q >= 1, got {q}")
    out: dict[int, int] = {}
    n = q
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi_from_factors(q: int, primes) -> int:
    phi = q
    for p in primes:
        phi = phi // p * (p - 1)
    return phi


@dataclass(frozen=True)
class ModulusContext:
    """A modulus q in factored form, tied to a prime-power table for y.

    ``z_q`` is the omega(q)-th prime (2 when q = 1) and ``theta_q`` its log
    measured against log y; both feed the error budgets.  ``p_plus_le_y``
    flags whether every prime of q lies in the table, which the exact
    counting routines require.
    """

    q: int
    y: int
    prime_divisors: tuple[int, ...]
    nu_divisors: tuple[int, ...]  # nu_p(y) for p | q, 0 where p > y
    omega_q: int
    phi_q: int
    z_q: int
    theta_q: float
    p_plus_le_y: bool

    def require_p_plus_le_y(self):
        if not self.p_plus_le_y:
            raise PreconditionError(
                f"P+(q)={max(self.prime_divisors)} exceeds y={self.y}; "
                "the ultrafriable counting identities need P+(q) <= y"
            )


def modulus_context(q: int, table: PrimePowerTable) -> ModulusContext:
    """Factor q and package the derived quantities used downstream."""
    fac = factorize(q)
    pdivs = tuple(sorted(fac))
    omega = len(pdivs)
    phi = euler_phi_from_factors(q, pdivs)
    z_q = nth_prime(omega)
    nu_divs = tuple(table.nu_of(p) for p in pdivs)
    return ModulusContext(
        q=q,
        y=table.y,
        prime_divisors=pdivs,
        nu_divisors=nu_divs,
        omega_q=omega,
        phi_q=phi,
        z_q=z_q,
        theta_q=math.log(z_q) / math.log(table.y),
        p_plus_le_y=(not pdivs) or pdivs[-1] <= table.y,
    )


def psi_q(table: PrimePowerTable, ctx: ModulusContext) -> float:
    """sum(nu_p log p) over p <= y not dividing q."""
    drop = sum(n * math.log(p) for p, n in zip(ctx.prime_divisors, ctx.nu_divisors))
    return table.psi_y - drop


def tau_N(table: PrimePowerTable, ctx: ModulusContext) -> int:
    """Exact divisor count prod(1 + nu_p) over p <= y, p not dividing q."""
    ctx.require_p_plus_le_y()
    out = 1
    pset = set(ctx.prime_divisors)
    for p, n in zip(table.primes, table.nu):
        if p not in pset:
            out *= 1 + n
    return out


def N_q(table: PrimePowerTable, ctx: ModulusContext) -> int:
    """Exact product of maximal prime powers p^nu_p over p <= y, p ∤ q."""
    ctx.require_p_plus_le_y()
    pset = set(ctx.prime_divisors)
    out = 1
    for p, pw in zip(table.primes, table.max_powers):
        if p not in pset:
            out *= pw
    return out


SMALL_Y = "SMALL_Y"
LARGE_Y = "LARGE_Y"
OUT_OF_DOMAIN = "OUT_OF_DOMAIN"


@dataclass(frozen=True)
class RegimeTag:
    """Which asymptotic regime an (x, y) pair falls in.

    ``small_y`` means psi(y) > 2 log x (the saddle-equation domain) and
    ``large_y`` means y >= (log x)^(2+epsilon).  Both can hold at once; the
    ``kind`` label then reports LARGE_Y, but consumers should test the flags.
    """

    kind: str
    small_y: bool
    large_y: bool
    u: float
    eta: float | None
    epsilon: float


def classify_regime(x: float, table: PrimePowerTable, epsilon: float = 0.1) -> RegimeTag:
    if x < 2:
        raise DomainError(f"need x >= 2, got {x}")
    lx = math.log(x)
    small = table.psi_y > 2.0 * lx
    large = table.y >= lx ** (2.0 + epsilon)
    if large:
        kind = LARGE_Y
    elif small:
        kind = SMALL_Y
    else:
        kind = OUT_OF_DOMAIN
    eta = table.psi_y / lx - 2.0 if small else None
    return RegimeTag(
        kind=kind,
        small_y=small,
        large_y=large,
        u=lx / math.log(table.y),
        eta=eta,
        epsilon=epsilon,
    )
