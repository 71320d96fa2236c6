"""Dirichlet characters, Gauss sums, twisted Bernoulli numbers and L-values.

Characters are stored as explicit value tables built from generators of
(Z/NZ)^*; no external label database is involved.  Values of a character of
order d are exact elements of Q(zeta_d), so real characters cost plain
rational arithmetic downstream.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm

from .arith import (
    Cyclotomic,
    bernoulli_number,
    bernoulli_polynomial,
    embed_complex,
)
from .ntheory import divisors, unit_group_generators


class ParityError(ValueError):
    """Character parity incompatible with the requested weight."""


class DirichletCharacter:
    """Totally multiplicative value table mod N, zero off the units.

    For N = 1 the character is the constant 1, including chi(0) = 1.
    """

    __slots__ = ("modulus", "order", "values", "_conductor")

    def __init__(self, modulus: int, values: tuple[Cyclotomic, ...], order: int):
        self.modulus = modulus
        self.values = values
        self.order = order
        self._conductor = None

    def __call__(self, n: int):
        return self.values[n % self.modulus]

    def scalar(self, n: int):
        """Value at n, unwrapped to a Fraction when it is rational."""
        v = self.values[n % self.modulus]
        return v.rational_value() if v.is_rational() else v

    @property
    def key(self):
        return (self.modulus, tuple(v.key() for v in self.values))

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        kind = "even" if self.is_even() else "odd"
        prim = "primitive" if self.is_primitive() else "imprimitive"
        return f"<character mod {self.modulus}, order {self.order}, {kind}, {prim}>"

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_even(self) -> bool:
        if self.modulus == 1:
            return True
        return self.values[self.modulus - 1] == 1

    def conductor(self) -> int:
        if self._conductor is None:
            N = self.modulus
            for M in divisors(N):
                ok = True
                for a in range(1, N + 1):
                    if gcd(a, N) == 1 and a % M == 1 % M:
                        if not self.values[a % N] == 1:
                            ok = False
                            break
                if ok:
                    self._conductor = M
                    break
        return self._conductor

    def is_primitive(self) -> bool:
        return self.conductor() == self.modulus

    def conjugate(self) -> "DirichletCharacter":
        vals = tuple(v.conjugate() for v in self.values)
        return DirichletCharacter(self.modulus, vals, self.order)

    def to_json(self):
        return {
            "modulus": self.modulus,
            "values": [v.to_json() for v in self.values],
            "even": self.is_even(),
            "primitive": self.is_primitive(),
        }


def _build_character(N: int, gens, exps) -> DirichletCharacter:
    orders = [d for _, d in gens]
    # order of the character and least zeta-order carrying all values
    L = 1
    for (g, d), e in zip(gens, exps):
        L = lcm(L, d // gcd(d, e))
    values = [None] * N
    zero = Cyclotomic.zero(L)
    for a in range(N):
        if gcd(a, N) != 1:
            values[a] = zero
    # walk the unit group by exponent vectors; the generator g_i of order d_i
    # maps to zeta_L^(e_i * L / d_i), an integer exponent by choice of L
    for avec in product(*[range(d) for d in orders]):
        r = 1
        t = 0
        for (g, d), a, e in zip(gens, avec, exps):
            r = r * pow(g, a, N) % N
            t += a * e * L // d
        values[r] = Cyclotomic.zeta(L, t % L)
    return DirichletCharacter(N, tuple(values), L)


def _value_sort_key(chi: DirichletCharacter):
    # lift all values to a common order so tuples compare consistently
    L = chi.order
    return tuple(v.lift(L).coeffs if v.order != L else v.coeffs for v in chi.values)


@lru_cache(maxsize=None)
def enumerate_characters(N: int) -> tuple[DirichletCharacter, ...]:
    """All phi(N) characters mod N, sorted by (order, value table).

    Sorting by order first keeps the trivial character at index 0 and, for
    prime N, puts the quadratic character at index 1.
    """
    if N < 1:
        raise ValueError("modulus must be >= 1")
    if N == 1:
        one = Cyclotomic.from_rational(1)
        return (DirichletCharacter(1, (one,), 1),)
    gens = unit_group_generators(N)
    chars = [
        _build_character(N, gens, exps)
        for exps in product(*[range(d) for _, d in gens])
    ]
    common = 1
    for c in chars:
        common = lcm(common, c.order)
    chars.sort(key=lambda c: (c.order, tuple(v.lift(common).coeffs for v in c.values)))
    return tuple(chars)


def trivial_character(N: int = 1) -> DirichletCharacter:
    return enumerate_characters(N)[0]


def is_even(chi: DirichletCharacter) -> bool:
    return chi.is_even()


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.is_primitive()


_GAUSS_CACHE: dict = {}


def gauss_sum(chi: DirichletCharacter) -> Cyclotomic:
    """W(chi) = sum_h chi(h) e^(2 pi i h / N), exact in Q(zeta_lcm(ord,N))."""
    N = chi.modulus
    if N == 1:
        return Cyclotomic.from_rational(1)
    ck = chi.key
    if ck not in _GAUSS_CACHE:
        m = lcm(chi.order, N)
        acc = Cyclotomic.zero(m)
        for h in range(N):
            v = chi.values[h]
            if v:
                acc = acc + v * Cyclotomic.zeta(m, h * (m // N))
        _GAUSS_CACHE[ck] = acc
    return _GAUSS_CACHE[ck]


_TB_CACHE: dict = {}


def twisted_bernoulli(n: int, chi: DirichletCharacter):
    """B_{n,chi} = N^(n-1) sum_{h mod N} chi(h) B_n(h/N), exact."""
    if n < 0:
        raise ValueError("index must be >= 0")
    ck = (chi.key, n)
    if ck in _TB_CACHE:
        return _TB_CACHE[ck]
    N = chi.modulus
    acc = None
    for h in range(N):
        v = chi.values[h]
        if v:
            term = v * bernoulli_polynomial(n, Fraction(h, N))
            acc = term if acc is None else acc + term
    if acc is None:
        acc = Cyclotomic.zero(chi.order)
    scale = Fraction(N) ** (n - 1)
    out = acc * scale
    if isinstance(out, Cyclotomic) and out.is_rational():
        out = out.rational_value()
    _TB_CACHE[ck] = out
    return out


def l_value_negative(chi: DirichletCharacter, k: int):
    """L(chi, 1-k) = -B_{k,chi}/k for (-1)^k = chi(-1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    sign = 1 if chi.is_even() else -1
    if (-1) ** k != sign:
        raise ParityError(f"need (-1)^k = chi(-1); got k={k} for {chi!r}")
    return twisted_bernoulli(k, chi) * Fraction(-1, k)


def l_value_numeric(chi: DirichletCharacter, s, terms: int = 400) -> complex:
    """L(chi, s) for Re(s) > 1 by direct summation with Euler-Maclaurin tail.

    The tail over each residue class a mod N uses g(t) = (a + N t)^(-s) with
    the closed-form odd derivatives; three correction terms push the error
    well below 1e-12 at the default cutoff for Re(s) >= 2.
    """
    s = complex(s)
    if s.real <= 1:
        raise ValueError("direct summation mode needs Re(s) > 1")
    N = chi.modulus
    M = max(terms, 50 * max(N, 1))
    acc = 0j
    for n in range(1, M + 1):
        v = chi(n)
        if v:
            acc += embed_complex(v) * cmath.exp(-s * cmath.log(n))
    # Euler-Maclaurin over t >= T for each class a + N*t just beyond M
    for a in range(N):
        v = chi.values[a] if N > 1 else chi.values[0]
        if not v:
            continue
        T = (M - a) // N + 1
        x0 = a + N * T
        w = embed_complex(v)
        integral = cmath.exp((1 - s) * cmath.log(x0)) / (N * (s - 1))
        boundary = cmath.exp(-s * cmath.log(x0)) / 2
        tail = integral + boundary
        # - sum_j B_2j/(2j)! g^(2j-1)(T); g^(m)(T) = (-1)^m N^m (s)_m x0^(-s-m)
        poch = s
        for j in (1, 2, 3):
            mder = 2 * j - 1
            deriv = -(N**mder) * poch * cmath.exp(-(s + mder) * cmath.log(x0))
            tail -= bernoulli_number(2 * j) / _factorial(2 * j) * deriv
            poch *= (s + mder) * (s + mder + 1)
        acc += w * tail
    return acc


def _factorial(n: int) -> float:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out
