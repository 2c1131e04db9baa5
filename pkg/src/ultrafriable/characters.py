"""Dirichlet characters mod q via CRT and discrete-log tables.

Representation: q factors as prod p^e; each unit group (Z/p^e)* is cyclic
with one generator (odd p, and p^e in {2, 4}) or C2 x C_{2^{e-2}} with
generators -1 and 5 (p = 2, e >= 3).  A character is an exponent vector
over the generators; values are exact roots of unity indexed in Z/L with
L the group exponent, and floating point enters only in the final
complex exponential.  Discrete logs are precomputed per component, O(q)
storage, which is ample for the supported range q <= 10^4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from . import primes as pr
from .counting import count_ultrafriable_residues
from .errors import DomainError, ResourceError

CHARACTER_Q_BOUND = 10**4


def _primitive_root_mod_p(p: int) -> int:
    if p == 2:
        return 1
    fac = sorted(pr.factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fac):
            return g
    raise RuntimeError(f"no primitive root found mod {p}")  # unreachable for prime p


def _primitive_root_mod_pe(p: int, e: int) -> int:
    g = _primitive_root_mod_p(p)
    if e == 1:
        return g
    # g lifts to p^e unless g^(p-1) == 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    prime_power: int
    generators: tuple[int, ...]  # residues mod prime_power
    orders: tuple[int, ...]
    dlog: dict  # residue mod prime_power -> exponent tuple


def _build_component(p: int, e: int) -> _Component:
    pe = p**e
    if p == 2 and e == 1:
        return _Component(2, (), (), {1: ()})
    if p == 2 and e >= 3:
        o1, o2 = 2, 2 ** (e - 2)
        dlog = {}
        r1 = 1
        for i in range(o1):
            r2 = r1
            for k in range(o2):
                dlog[r2 % pe] = (i, k)
                r2 = (r2 * 5) % pe
            r1 = (r1 * (pe - 1)) % pe
        return _Component(pe, (pe - 1, 5), (o1, o2), dlog)
    g = _primitive_root_mod_pe(p, e) if p != 2 else 3  # p=2, e=2: (Z/4)* = <3>
    order = pe - pe // p
    dlog = {}
    r = 1
    for k in range(order):
        dlog[r] = (k,)
        r = (r * g) % pe
    return _Component(pe, (g,), (order,), dlog)


class CharacterGroup:
    """The full character group mod q with shared evaluation tables."""

    def __init__(self, q: int):
        if q < 1:
            raise DomainError(f"need q >= 1, got {q}")
        if q > CHARACTER_Q_BOUND:
            raise ResourceError(f"q={q} exceeds the character bound {CHARACTER_Q_BOUND}")
        self.q = q
        comps = []
        for p, e in sorted(pr.factorize(q).items()):
            comps.append(_build_component(p, e))
        self.components = comps
        self.orders = tuple(o for c in comps for o in c.orders)
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        self.phi_q = math.prod(self.orders) if self.orders else 1
        L = self.exponent
        self.roots = np.exp(2j * math.pi * np.arange(L) / L)
        # exponent index of n: sum over generators of t_i * dlog_i(n) * (L / o_i)
        self._weights = tuple(L // o for o in self.orders)

    def dlog_vector(self, n: int) -> tuple[int, ...] | None:
        """Generator exponents of n, or None when gcd(n, q) > 1."""
        if math.gcd(n, self.q) != 1:
            return None
        out: list[int] = []
        for c in self.components:
            v = c.dlog.get(n % c.prime_power)
            if v is None:
                return None
            out.extend(v)
        return tuple(out)

    def characters(self) -> list["DirichletCharacter"]:
        return [DirichletCharacter(self, exps) for exps in product(*(range(o) for o in self.orders))]


class DirichletCharacter:
    """A single character chi mod q, identified by generator exponents."""

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]):
        self.group = group
        self.modulus = group.q
        self.exponents = tuple(exponents)
        self.is_principal = all(t == 0 for t in self.exponents)
        orders = group.orders
        self.is_real = all((2 * t) % o == 0 for t, o in zip(self.exponents, orders))
        self.order = math.lcm(*(o // math.gcd(o, t) for t, o in zip(self.exponents, orders))) \
            if self.exponents else 1

    def value_index(self, n: int) -> int | None:
        """k with chi(n) = exp(2 pi i k / L), or None when chi(n) = 0."""
        dv = self.group.dlog_vector(n)
        if dv is None:
            return None
        L = self.group.exponent
        k = 0
        for t, d, wgt in zip(self.exponents, dv, self.group._weights):
            k += t * d * wgt
        return k % L

    def __call__(self, n: int) -> complex:
        k = self.value_index(n)
        if k is None:
            return 0j
        return complex(self.group.roots[k])

    def conj(self, n: int) -> complex:
        k = self.value_index(n)
        if k is None:
            return 0j
        return complex(np.conj(self.group.roots[k]))

    def __repr__(self):
        return f"DirichletCharacter(q={self.modulus}, exponents={self.exponents})"


@lru_cache(maxsize=64)
def character_group(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q in lexicographic exponent order."""
    return character_group(q).characters()


# ---------------------------------------------------------------------------
# character-side diagnostic sums
# ---------------------------------------------------------------------------

def w_q(tau: float, beta: float, table: pr.PrimePowerTable, ctx: pr.ModulusContext,
        chi: DirichletCharacter) -> float:
    """sum over p <= y, p ∤ q of (1 - Re(chi(p) p^{-i tau}))^2 / p^beta."""
    if beta <= 0:
        raise DomainError(f"need beta > 0, got {beta}")
    pset = set(ctx.prime_divisors)
    out = 0.0
    for p, lp in zip(table.primes, table.logp_arr):
        if p in pset:
            continue
        v = chi(p) * complex(math.cos(tau * lp), -math.sin(tau * lp))
        out += (1.0 - v.real) ** 2 * math.exp(-beta * lp)
    return out


def d_sum(tau: float, beta: float, y: int, chi: DirichletCharacter) -> float:
    """sum over p <= y of (1 - Re(chi(p) p^{-i tau})) log p / p^beta."""
    if beta <= 0:
        raise DomainError(f"need beta > 0, got {beta}")
    table = pr.build_table(y)
    out = 0.0
    for p, lp in zip(table.primes, table.logp_arr):
        v = chi(p) * complex(math.cos(tau * lp), -math.sin(tau * lp))
        out += (1.0 - v.real) * lp * math.exp(-beta * lp)
    return out


def s_sum(tau: float, beta: float, y: int, chi: DirichletCharacter) -> complex:
    """sum over n <= y of chi(n) Lambda(n) / n^{beta + i tau}.

    Lambda is the von Mangoldt function: log p on prime powers, else 0.
    """
    if beta <= 0:
        raise DomainError(f"need beta > 0, got {beta}")
    table = pr.build_table(y)
    out = 0j
    for p, nu, lp in zip(table.primes, table.nu, table.logp_arr):
        n = 1
        for _ in range(nu):
            n *= p
            v = chi(n)
            if v != 0:
                ln = math.log(n)
                out += v * lp * math.exp(-beta * ln) * complex(
                    math.cos(tau * ln), -math.sin(tau * ln)
                )
    return out


def von_mangoldt_total(table: pr.PrimePowerTable) -> float:
    """sum of Lambda(n) for n <= y; equals psi(y)."""
    return float(np.dot(table.nu_arr.astype(np.float64), table.logp_arr))


# ---------------------------------------------------------------------------
# orthogonality reconstruction
# ---------------------------------------------------------------------------

def character_sums_from_residues(counts, chars: list[DirichletCharacter]) -> list[complex]:
    """Evaluate sum_a chi(a) * counts[a] for every chi from one residue vector."""
    out = []
    for chi in chars:
        s = 0j
        for a, c in enumerate(counts.counts):
            if c:
                v = chi(a)
                if v != 0:
                    s += v * c
        out.append(s)
    return out


def reconstruct_progression(x, table: pr.PrimePowerTable, a: int, q: int) -> complex:
    """Rebuild the progression count from character sums.

    Evaluates (1/phi(q)) * [ Upsilon_q + sum over nonprincipal chi of
    conj(chi(a)) * Upsilon(x, y; chi) ].  The real part must match the
    exact class count; the imaginary part is root-of-unity rounding.
    """
    if math.gcd(a, q) != 1:
        raise DomainError(f"need (a, q) = 1, got a={a}, q={q}")
    counts = count_ultrafriable_residues(x, table, q)
    chars = enumerate_characters(q)
    sums = character_sums_from_residues(counts, chars)
    phi_q = character_group(q).phi_q
    total = 0j
    for chi, s in zip(chars, sums):
        if chi.is_principal:
            total += s  # = Upsilon_q exactly
        else:
            total += chi.conj(a) * s
    return total / phi_q
