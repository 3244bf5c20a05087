"""Controlled radical extensions of cyclotomic fields.

Stationary-phase inversion extracts fractional-power roots of leading
coefficients; those roots live here as formal monomials b^e over a
registry ("tower") of radicands.  Monomials with integer exponents fold
back into the cyclotomic coefficient, so a RadicalCoeff with no genuine
radical content collapses to a plain CycloNum.

Registered radicands are assumed multiplicatively independent modulo
roots of unity; registration checks pairwise perfect-power relations up
to exponent 16 and merges what it finds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .cyclo import (
    Ball,
    CycloNum,
    DivisionByZero,
    _positive_rational_angle,
    embed_ball,
    minimize_level,
)

POWER_RELATION_BOUND = 16


class RadicalError(Exception):
    pass


class NonInvertibleLeadingTerm(RadicalError):
    pass


class RadicalTower:
    """Registry of radicands.  Entries are either a base CycloNum or a
    redirect ('power', idx, k) meaning this radicand equals base_idx^k."""

    def __init__(self):
        self.entries: list = []

    def register(self, c: CycloNum) -> tuple[int, int]:
        """Return (index, k) with c = base_index^k."""
        if c.is_zero():
            raise RadicalError("zero radicand")
        c = minimize_level(c)
        for idx, entry in enumerate(self.entries):
            if not isinstance(entry, CycloNum):
                continue
            acc = entry
            for j in range(1, POWER_RELATION_BOUND + 1):
                if acc == c:
                    return idx, j
                acc = acc * entry
        for idx, entry in enumerate(self.entries):
            if not isinstance(entry, CycloNum):
                continue
            acc = c
            for j in range(2, POWER_RELATION_BOUND + 1):
                acc = acc * c
                if acc == entry:
                    new_idx = len(self.entries)
                    self.entries.append(c)
                    self.entries[idx] = ("power", new_idx, j)
                    return new_idx, 1
        self.entries.append(c)
        return len(self.entries) - 1, 1

    def resolve(self, idx: int) -> tuple[int, int]:
        """Follow redirects; return (base_index, k)."""
        k = 1
        while not isinstance(self.entries[idx], CycloNum):
            _, idx2, j = self.entries[idx]
            idx, k = idx2, k * j
        return idx, k

    def value(self, idx: int) -> CycloNum:
        base, k = self.resolve(idx)
        return self.entries[base] ** k


TOWER = RadicalTower()


def reset_tower():
    global TOWER
    TOWER = RadicalTower()


Monomial = tuple[tuple[int, Fraction], ...]  # ((radicand_index, exponent), ...)


@dataclass(frozen=True)
class RadicalCoeff:
    """CycloNum-linear combination of radical monomials prod b_i^{e_i},
    exponents in (0,1), in normal form."""

    terms: tuple[tuple[Monomial, CycloNum], ...]

    @staticmethod
    def make(terms, tower: RadicalTower | None = None):
        """Normalize a list of (monomial, coeff) pairs; collapse to a
        CycloNum when no radical content remains."""
        tower = tower or TOWER
        merged: list[tuple[Monomial, CycloNum]] = []
        for mono, coeff in terms:
            mono, coeff = _normalize_monomial(mono, coeff, tower)
            if coeff.is_zero():
                continue
            for i, (m2, c2) in enumerate(merged):
                if m2 == mono:
                    merged[i] = (m2, c2 + coeff)
                    break
            else:
                merged.append((mono, coeff))
        merged = [(m, minimize_level(c)) for m, c in merged if not c.is_zero()]
        merged.sort(key=lambda mc: _monomial_key(mc[0]))
        if not merged:
            return CycloNum.zero()
        if len(merged) == 1 and merged[0][0] == ():
            return merged[0][1]
        return RadicalCoeff(tuple(merged))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"RadicalCoeff({self.terms!r})"

    __hash__ = None


def _normalize_monomial(mono, coeff: CycloNum, tower: RadicalTower):
    acc: dict[int, Fraction] = {}
    for idx, e in mono:
        base, k = tower.resolve(idx)
        e = Fraction(e) * k
        acc[base] = acc.get(base, Fraction(0)) + e
    out = []
    for base, e in acc.items():
        n = math.floor(e)
        frac = e - n
        if n:
            coeff = coeff * tower.entries[base] ** n
        if frac:
            out.append((base, frac))
    out.sort()
    return tuple(out), coeff


def _monomial_key(mono: Monomial):
    return tuple((idx, e.numerator, e.denominator) for idx, e in mono)


# -- uniform coefficient operations (CycloNum | RadicalCoeff) --------


def _terms_of(c) -> tuple[tuple[Monomial, CycloNum], ...]:
    if isinstance(c, RadicalCoeff):
        return c.terms
    if isinstance(c, (int, Fraction)):
        c = CycloNum.from_rational(c)
    return (((), c),)


def cadd(a, b):
    return RadicalCoeff.make(list(_terms_of(a)) + list(_terms_of(b)))


def cneg(a):
    return RadicalCoeff.make([(m, -c) for m, c in _terms_of(a)])


def csub(a, b):
    return cadd(a, cneg(b))


def cmul(a, b, tower: RadicalTower | None = None):
    tower = tower or TOWER
    out = []
    for m1, c1 in _terms_of(a):
        for m2, c2 in _terms_of(b):
            out.append((tuple(list(m1) + list(m2)), c1 * c2))
    return RadicalCoeff.make(out, tower)


def cis_zero(a) -> bool:
    if isinstance(a, RadicalCoeff):
        return a.is_zero()
    if isinstance(a, (int, Fraction)):
        return a == 0
    return a.is_zero()


def ceq(a, b) -> bool:
    return cis_zero(csub(a, b))


def cinv(a, tower: RadicalTower | None = None):
    """Inverse; defined for plain CycloNums and single-monomial radical
    coefficients (all the series engine needs)."""
    tower = tower or TOWER
    terms = _terms_of(a)
    if not isinstance(a, RadicalCoeff):
        c = terms[0][1]
        if c.is_zero():
            raise DivisionByZero("inverse of zero")
        return c.inv()
    if len(a.terms) != 1:
        raise NonInvertibleLeadingTerm(
            "inverse of a multi-term radical coefficient is not supported"
        )
    mono, c = a.terms[0]
    inv_mono = []
    coeff = c.inv()
    for idx, e in mono:
        # b^-e = b^(1-e) / b
        inv_mono.append((idx, 1 - e))
        coeff = coeff * tower.value(idx).inv()
    return RadicalCoeff.make([(tuple(inv_mono), coeff)], tower)


def cpow(a, k: int, tower: RadicalTower | None = None):
    if k < 0:
        return cpow(cinv(a, tower), -k, tower)
    result = CycloNum.one()
    base = a
    while k:
        if k & 1:
            result = cmul(result, base, tower)
        base = cmul(base, base, tower)
        k >>= 1
    return result


def rational_nth_root(q: Fraction, n: int) -> Fraction | None:
    """Exact n-th root of a positive rational, or None."""
    if q <= 0:
        return None

    def iroot(m: int):
        r = round(m ** (1.0 / n))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand**n == m:
                return cand
        return None

    a = iroot(q.numerator)
    b = iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _prime_factorization(m: int) -> dict[int, int] | None:
    """Trial-division factorization; None when a huge cofactor survives."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
        if d > 10**6:
            break
    if m > 1:
        if m > 10**12:
            return None
        out[m] = out.get(m, 0) + 1
    return out


def _rational_root_monomial(rho: Fraction, n: int, tower: RadicalTower):
    """(monomial, rational factor) with rho^(1/n) = factor * monomial,
    radicands restricted to primes so products of roots stay canonical."""
    num = _prime_factorization(rho.numerator)
    den = _prime_factorization(rho.denominator)
    if num is None or den is None:
        idx, k = tower.register(CycloNum.from_rational(rho))
        return ((idx, Fraction(k, n)),), Fraction(1)
    exps = dict(num)
    for p, a in den.items():
        exps[p] = exps.get(p, 0) - a
    mono = []
    rat = Fraction(1)
    for p in sorted(exps):
        e = Fraction(exps[p], n)
        whole = math.floor(e)
        frac = e - whole
        if whole:
            rat *= Fraction(p) ** whole
        if frac:
            idx, k = tower.register(CycloNum.from_rational(p))
            mono.append((idx, k * frac))
    return tuple(mono), rat


def croot(a, n: int, tower: RadicalTower | None = None):
    """An n-th root of a nonzero coefficient (one branch; the others are
    roots-of-unity multiples, i.e. Galois conjugates downstream)."""
    tower = tower or TOWER
    if n == 1:
        return a
    if cis_zero(a):
        raise RadicalError("root of zero")
    if isinstance(a, RadicalCoeff):
        if len(a.terms) != 1:
            raise NonInvertibleLeadingTerm("root of a multi-term radical coefficient")
        mono, c = a.terms[0]
        root_c = croot(c, n, tower)
        out_mono = [(idx, e / n) for idx, e in mono]
        return cmul(RadicalCoeff.make([(tuple(out_mono), CycloNum.one())], tower), root_c, tower)
    if isinstance(a, (int, Fraction)):
        a = CycloNum.from_rational(a)
    a = minimize_level(a)
    ang = _positive_rational_angle(a)
    if ang is not None:
        # a = rho * e^(2 pi i ang) with rho a positive rational
        t = ang.denominator
        s = ang.numerator
        zeta_part = CycloNum.zeta(t * n, s) if ang else CycloNum.one()
        rho = (a * CycloNum.zeta(2 * t, (-s * 2) % (2 * t))).as_rational()
        assert rho > 0
        rr = rational_nth_root(rho, n)
        if rr is not None:
            return zeta_part * rr
        mono, rat = _rational_root_monomial(rho, n, tower)
        return cmul(
            RadicalCoeff.make([(mono, CycloNum.from_rational(rat))], tower), zeta_part, tower
        )
    idx, k = tower.register(a)
    return RadicalCoeff.make([(((idx, Fraction(k, n)),), CycloNum.one())], tower)


def cembed(a, precision_bits: int = 128, tower: RadicalTower | None = None) -> Ball:
    """Numeric ball for a coefficient, principal branch for radicals."""
    tower = tower or TOWER
    total = Ball(0j, 0.0)
    for mono, c in _terms_of(a):
        b = embed_ball(c, precision_bits)
        for idx, e in mono:
            v = embed_ball(tower.value(idx), precision_bits)
            with mpmath.workprec(precision_bits + 16):
                z = mpmath.mpc(v.center)
                w = complex(mpmath.power(z, mpmath.mpf(e.numerator) / e.denominator))
            mag = abs(w)
            rel = v.radius / max(abs(complex(v.center)), 1e-300)
            b = b * Ball(w, mag * (abs(float(e)) * rel * 4 + 2.0 ** (-precision_bits)))
        total = total + b
    return total


def csort_key(a):
    """Representation-independent total-order key for coefficients."""
    if isinstance(a, (int, Fraction)):
        a = CycloNum.from_rational(a)
    if isinstance(a, CycloNum):
        m = minimize_level(a)
        return (0, m.level, tuple(m.coeffs))
    return (
        1,
        tuple(
            (_monomial_key(mono), minimize_level(c).level, tuple(minimize_level(c).coeffs))
            for mono, c in a.terms
        ),
    )
