"""Ramified polar parts and truncated Puiseux series.

A PolarPart encodes sum_j a_j t^(-j/p), the exponential part of a
formal solution; the zero polar part (p = 1, no terms) stands for
regular factors.  Normal form divides out common factors of p and the
exponent numerators, so stored parts are minimal or zero.

The series machinery (Lser, invert_series) is the workhorse behind the
stationary-phase legs of the Fourier transform: compositional inversion
by Newton iteration, doubling the number of certified terms per round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNum, minimize_level
from .radicals import (
    NonInvertibleLeadingTerm,
    cadd,
    ceq,
    cinv,
    cis_zero,
    cmul,
    cneg,
    cpow,
    croot,
    csort_key,
    csub,
)


class PuiseuxError(Exception):
    pass


class ZeroPolarPart(PuiseuxError):
    pass


class NotMinimal(PuiseuxError):
    pass


class OutOfRange(PuiseuxError):
    pass


def _norm_coeff(c):
    if isinstance(c, (int, Fraction)):
        c = CycloNum.from_rational(c)
    if isinstance(c, CycloNum):
        c = minimize_level(c)
    return c


@dataclass(frozen=True)
class PolarPart:
    """sum_j a_j t^(-j/ram); terms sorted by descending j."""

    ram: int
    terms: tuple  # ((j, coeff), ...) j positive int, coeff nonzero

    @staticmethod
    def make(ram: int, terms) -> "PolarPart":
        if isinstance(terms, dict):
            terms = terms.items()
        clean = [(j, _norm_coeff(c)) for j, c in terms if not cis_zero(c)]
        if not clean:
            return PolarPart(1, ())
        assert all(j > 0 for j, _ in clean)
        g = math.gcd(ram, math.gcd(*[j for j, _ in clean]))
        if g > 1:
            clean = [(j // g, c) for j, c in clean]
            ram //= g
        clean.sort(key=lambda jc: -jc[0])
        return PolarPart(ram, tuple(clean))

    @staticmethod
    def zero() -> "PolarPart":
        return PolarPart(1, ())

    @staticmethod
    def unramified(coeff_by_order) -> "PolarPart":
        """Polar part sum c_j t^-j with integer orders."""
        return PolarPart.make(1, coeff_by_order)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, j: int):
        for jj, c in self.terms:
            if jj == j:
                return c
        return CycloNum.zero()

    def __eq__(self, other):
        if not isinstance(other, PolarPart):
            return NotImplemented
        if self.ram != other.ram or len(self.terms) != len(other.terms):
            return False
        return all(
            j1 == j2 and ceq(c1, c2)
            for (j1, c1), (j2, c2) in zip(self.terms, other.terms)
        )

    __hash__ = None

    def sort_key(self):
        return tuple((-j, csort_key(c)) for j, c in self.terms) or ((0, ()),)

    def __repr__(self):
        if self.is_zero():
            return "PolarPart(0)"
        body = " + ".join(f"({c!r})*t^(-{j}/{self.ram})" for j, c in self.terms)
        return f"PolarPart[{body}]"


# -- operations ------------------------------------------------------


def slope(phi: PolarPart) -> Fraction:
    if phi.is_zero():
        return Fraction(0)
    return Fraction(phi.terms[0][0], phi.ram)


def is_minimal(phi: PolarPart) -> bool:
    if phi.is_zero():
        raise ZeroPolarPart("minimality of the zero polar part")
    # PolarPart.make reduces pullbacks, so stored parts are minimal
    g = math.gcd(phi.ram, math.gcd(*[j for j, _ in phi.terms]))
    return g == 1


def ramify(phi: PolarPart, q: int) -> PolarPart:
    """Pullback under t = u^q."""
    assert q >= 1
    return PolarPart.make(phi.ram, [(j * q, c) for j, c in phi.terms])


def _raw_ramify(phi: PolarPart, q: int):
    """Exponent map at level ram*q without normal-form reduction."""
    return phi.ram * q, {j * q: c for j, c in phi.terms}


def galois_act(phi: PolarPart, m: int) -> PolarPart:
    """Coefficient a_j -> a_j * zeta_p^(-j*m); z -> nu z on the cover."""
    p = phi.ram
    if not 0 <= m < p:
        raise OutOfRange(f"galois index {m} not in [0, {p})")
    if m == 0 or phi.is_zero():
        return phi
    out = [(j, cmul(c, CycloNum.zeta(p, (-j * m) % p))) for j, c in phi.terms]
    res = PolarPart(p, tuple((j, _norm_coeff(c)) for j, c in out if not cis_zero(c)))
    return res


def orbit(phi: PolarPart) -> list[PolarPart]:
    return [galois_act(phi, m) for m in range(phi.ram)]


def canonical_rep(phi: PolarPart) -> tuple[PolarPart, int]:
    """Deterministic orbit representative and the witness m with
    galois_act(rep, m) == phi."""
    if phi.is_zero():
        return phi, 0
    if not is_minimal(phi):
        raise NotMinimal(repr(phi))
    orb = orbit(phi)
    best_i = min(range(len(orb)), key=lambda i: orb[i].sort_key())
    rep = orb[best_i]
    # rep = galois_act(phi, best_i) so phi = galois_act(rep, -best_i)
    m = (-best_i) % phi.ram
    return rep, m


def diff_pole_order(phi: PolarPart, psi: PolarPart, level: int | None = None) -> int:
    """Largest exponent numerator of phi - psi at the common (or given)
    ramification level; 0 when equal."""
    e = level or math.lcm(phi.ram, psi.ram)
    assert e % phi.ram == 0 and e % psi.ram == 0
    _, m1 = _raw_ramify(phi, e // phi.ram)
    _, m2 = _raw_ramify(psi, e // psi.ram)
    diff = dict(m1)
    for j, c in m2.items():
        diff[j] = csub(diff.get(j, CycloNum.zero()), c)
    orders = [j for j, c in diff.items() if not cis_zero(c)]
    return max(orders) if orders else 0


def polar_add(phi: PolarPart, psi: PolarPart) -> PolarPart:
    e = math.lcm(phi.ram, psi.ram)
    _, m1 = _raw_ramify(phi, e // phi.ram)
    _, m2 = _raw_ramify(psi, e // psi.ram)
    for j, c in m2.items():
        m1[j] = cadd(m1.get(j, CycloNum.zero()), c)
    return PolarPart.make(e, m1)


def polar_neg(phi: PolarPart) -> PolarPart:
    return PolarPart(phi.ram, tuple((j, cneg(c)) for j, c in phi.terms))


def polar_scale(phi: PolarPart, c) -> PolarPart:
    """Multiply every coefficient by c."""
    return PolarPart.make(phi.ram, [(j, cmul(a, c)) for j, a in phi.terms])


def unramified_head(phi: PolarPart) -> PolarPart:
    """The integer-exponent sub-polar-part of phi."""
    p = phi.ram
    return PolarPart.make(1, [(j // p, c) for j, c in phi.terms if j % p == 0])


# -- truncated integer-exponent Laurent series -----------------------


class Lser:
    """Finite Laurent series sum c_k w^k with terms certified for
    exponents < trunc."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict, trunc: int):
        self.terms = {k: c for k, c in terms.items() if k < trunc and not cis_zero(c)}
        self.trunc = trunc

    @staticmethod
    def const(c, trunc: int) -> "Lser":
        return Lser({0: c}, trunc)

    @staticmethod
    def monomial(k: int, c, trunc: int) -> "Lser":
        return Lser({k: c}, trunc)

    def valuation(self) -> int:
        if not self.terms:
            return self.trunc
        return min(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Lser") -> "Lser":
        t = min(self.trunc, other.trunc)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = cadd(out.get(k, CycloNum.zero()), c)
        return Lser(out, t)

    def __neg__(self) -> "Lser":
        return Lser({k: cneg(c) for k, c in self.terms.items()}, self.trunc)

    def __sub__(self, other: "Lser") -> "Lser":
        return self + (-other)

    def __mul__(self, other: "Lser") -> "Lser":
        va, vb = self.valuation(), other.valuation()
        t = min(self.trunc + vb, other.trunc + va)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                if k < t:
                    out[k] = cadd(out.get(k, CycloNum.zero()), cmul(c1, c2))
        return Lser(out, t)

    def scale(self, c) -> "Lser":
        return Lser({k: cmul(v, c) for k, v in self.terms.items()}, self.trunc)

    def shift(self, d: int) -> "Lser":
        return Lser({k + d: c for k, c in self.terms.items()}, self.trunc + d)

    def inverse(self) -> "Lser":
        """Multiplicative inverse; leading coefficient must be
        invertible (cyclotomic or single radical monomial)."""
        v = self.valuation()
        if self.is_zero():
            raise NonInvertibleLeadingTerm("inverse of zero series")
        lead = self.terms[v]
        rest = Lser({k - v: c for k, c in self.terms.items() if k != v}, self.trunc - v)
        r = rest.scale(cinv(lead))  # series with positive valuation
        order = self.trunc - v
        # 1/(1+r) = sum (-r)^k
        acc = Lser.const(CycloNum.one(), order)
        term = Lser.const(CycloNum.one(), order)
        neg_r = -r
        vr = max(1, neg_r.valuation())
        for _ in range(0, order // vr + 1):
            term = term * neg_r
            if term.is_zero():
                break
            acc = acc + term
        return acc.scale(cinv(lead)).shift(-v)

    def pow(self, k: int) -> "Lser":
        if k < 0:
            return self.inverse().pow(-k)
        result = Lser.const(CycloNum.one(), self.trunc - self.valuation() + abs(k) * self.valuation() + 1)
        base = self
        first = True
        while k:
            if k & 1:
                result = base if first else result * base
                first = False
            k >>= 1
            if k:
                base = base * base
        if first:
            return Lser.const(CycloNum.one(), self.trunc)
        return result

    def compose_into(self, u: "Lser") -> "Lser":
        """Evaluate this series at w = u (u must have valuation >= 1)."""
        assert u.valuation() >= 1
        out = None
        for k in sorted(self.terms):
            t = u.pow(k).scale(self.terms[k])
            out = t if out is None else out + t
        if out is None:
            return Lser({}, self.trunc)
        return Lser(out.terms, min(out.trunc, self.trunc * max(1, u.valuation())))

    def __eq__(self, other):
        t = min(self.trunc, other.trunc)
        keys = set(self.terms) | set(other.terms)
        return all(
            ceq(self.terms.get(k, CycloNum.zero()), other.terms.get(k, CycloNum.zero()))
            for k in keys
            if k < t
        )

    def __repr__(self):
        body = " + ".join(f"({self.terms[k]!r})w^{k}" for k in sorted(self.terms))
        return f"Lser[{body or '0'}; O(w^{self.trunc})]"


def solve_series(S: Lser, m: int, order: int) -> Lser:
    """Solve S(u) = w^m for u = sum_{i>=1} b_i w^i by Newton iteration;
    S has leading term c_m u^m with m != 0.  Certified to w^order."""
    v = S.valuation()
    assert v == m and m != 0
    c_m = S.terms[m]
    if m > 0:
        alpha = croot(cinv(c_m), m)
    else:
        alpha = croot(c_m, -m)
    trunc = order + abs(m) + 2
    u = Lser({1: alpha}, 2)
    target_known = 1
    Sd = Lser({k - 1: cmul(c, Fraction(k)) for k, c in S.terms.items()}, S.trunc - 1)
    while target_known < order:
        target_known = min(2 * target_known, order)
        u = Lser(u.terms, target_known + 1)
        Su = _eval_laurent(S, u, target_known + m if m > 0 else target_known + m)
        w_m = Lser.monomial(m, CycloNum.one(), Su.trunc)
        F = Su - w_m
        if F.is_zero():
            u = Lser(u.terms, target_known + 1)
            continue
        Sdu = _eval_laurent(Sd, u, F.trunc - 1)
        u = Lser((u - F * Sdu.inverse()).terms, target_known + 1)
    # certification: back-substitute
    check = _eval_laurent(S, u, order + m)
    assert check == Lser.monomial(m, CycloNum.one(), order + m), "series inversion failed back-substitution"
    return u


def _eval_laurent(S: Lser, u: Lser, trunc: int) -> Lser:
    """Evaluate Laurent polynomial S at u (valuation 1 unit series)."""
    out = Lser({}, trunc)
    for k, c in S.terms.items():
        out = out + u.pow(k).scale(c)
    return Lser(out.terms, min(out.trunc, trunc))


@dataclass
class PuiseuxSeries:
    """sum c_k tau^(k/ram); exponent numerators below trunc_num are
    certified complete."""

    ram: int
    terms: dict
    trunc_num: int

    def leading(self):
        ks = [k for k in self.terms if not cis_zero(self.terms[k])]
        if not ks:
            return None
        k = min(ks)
        return k, self.terms[k]

    def __eq__(self, other):
        e = math.lcm(self.ram, other.ram)
        a = {k * (e // self.ram): c for k, c in self.terms.items()}
        b = {k * (e // other.ram): c for k, c in other.terms.items()}
        t = min(self.trunc_num * (e // self.ram), other.trunc_num * (e // other.ram))
        keys = set(a) | set(b)
        return all(
            ceq(a.get(k, CycloNum.zero()), b.get(k, CycloNum.zero()))
            for k in keys
            if k < t
        )


def invert_series(s: PuiseuxSeries, target_terms: int) -> PuiseuxSeries:
    """Compositional inverse: solve tau = s(z) for z as a Puiseux series
    in tau, with at least target_terms certified terms."""
    lead = s.leading()
    if lead is None or lead[0] == 0:
        raise NonInvertibleLeadingTerm("need a nonzero leading term of nonzero exponent")
    p = s.ram
    m = lead[0]
    S = Lser(dict(s.terms), s.trunc_num)
    order = abs(m) * (target_terms + 1) + 1
    u = solve_series(S, m, order)
    # z = u^p, expressed in w = tau^(1/m): exponents i/m in tau
    z = u.pow(p)
    if m > 0:
        return PuiseuxSeries(m, dict(z.terms), z.trunc)
    return PuiseuxSeries(-m, {-k: c for k, c in z.terms.items()}, 10**9)
