"""Formal local data at a puncture: elementary factors, ranks,
irregularity, formal-monodromy exponents and horizontal-hom dimensions.

A FormalType is a merged multiset of factors (phi, R): phi a canonical
minimal-or-zero polar part, R the regular part given by Jordan blocks
(exponent mod 1, size).  The factor of ramification p and regular rank
s contributes rank p*s.

Exponent convention: the factor (phi, p, block (alpha, k)) has formal
monodromy exponents alpha + j/p, j = 0..p-1, each with multiplicity k.
The literature sometimes inserts an extra constant shift depending on
(p, q); any such global shift cancels in all End computations, which is
where correctness matters here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNum, minimize_level
from .puiseux import (
    PolarPart,
    canonical_rep,
    diff_pole_order,
    galois_act,
    polar_add,
    ramify,
    slope,
)


class FormalError(Exception):
    pass


@dataclass(frozen=True)
class Location:
    """A point of the projective line: a coefficient value or infinity."""

    value: CycloNum | None  # None encodes infinity

    @staticmethod
    def inf() -> "Location":
        return Location(None)

    @staticmethod
    def of(x) -> "Location":
        if isinstance(x, Location):
            return x
        if isinstance(x, (int, Fraction)):
            x = CycloNum.from_rational(x)
        return Location(minimize_level(x))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    def __eq__(self, other):
        if not isinstance(other, Location):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return self.is_inf and other.is_inf
        return self.value == other.value

    __hash__ = None

    def sort_key(self):
        if self.is_inf:
            return (1, ())
        m = minimize_level(self.value)
        return (0, (m.level, tuple(m.coeffs)))

    def __repr__(self):
        return "inf" if self.is_inf else f"Loc({self.value!r})"


INF = Location.inf()


def _norm_exp(a) -> Fraction:
    return Fraction(a) % 1


@dataclass(frozen=True)
class RegularPart:
    """Jordan data of a regular connection: blocks (exponent mod 1, size)."""

    blocks: tuple[tuple[Fraction, int], ...]

    @staticmethod
    def make(blocks) -> "RegularPart":
        clean = sorted(
            ((_norm_exp(a), int(s)) for a, s in blocks if s > 0),
            key=lambda b: (b[0], -b[1]),
        )
        if not clean:
            raise FormalError("regular part must have positive rank")
        return RegularPart(tuple(clean))

    @staticmethod
    def single(exponent, size: int = 1) -> "RegularPart":
        return RegularPart.make([(exponent, size)])

    def rank(self) -> int:
        return sum(s for _, s in self.blocks)

    def shifted(self, b) -> "RegularPart":
        return RegularPart.make([(a + Fraction(b), s) for a, s in self.blocks])

    def __repr__(self):
        return "Reg[" + ", ".join(f"({a},{s})" for a, s in self.blocks) + "]"


@dataclass(frozen=True)
class ExpFactor:
    phi: PolarPart  # canonical (minimal or zero)
    reg: RegularPart

    def rank(self) -> int:
        return self.phi.ram * self.reg.rank()

    def __repr__(self):
        return f"El({self.phi!r}, {self.reg!r})"


@dataclass(frozen=True)
class FormalType:
    factors: tuple[ExpFactor, ...]

    @staticmethod
    def make(factors) -> "FormalType":
        """Canonicalize phis, merge factors on equal orbits, sort."""
        merged: list[tuple[PolarPart, list]] = []
        for f in factors:
            if isinstance(f, ExpFactor):
                phi, reg = f.phi, f.reg
            else:
                phi, reg = f
            rep, _ = canonical_rep(phi)
            for i, (p2, blocks) in enumerate(merged):
                if p2 == rep:
                    merged[i] = (p2, blocks + list(reg.blocks))
                    break
            else:
                merged.append((rep, list(reg.blocks)))
        out = [ExpFactor(phi, RegularPart.make(blocks)) for phi, blocks in merged]
        out.sort(key=lambda f: (f.phi.sort_key(), f.reg.blocks))
        if not out:
            raise FormalError("formal type must have at least one factor")
        return FormalType(tuple(out))

    @staticmethod
    def regular(reg: RegularPart) -> "FormalType":
        return FormalType.make([(PolarPart.zero(), reg)])

    @staticmethod
    def trivial(r: int) -> "FormalType":
        """Apparent-singularity data: r copies of exponent 0, size 1."""
        return FormalType.regular(RegularPart.make([(Fraction(0), 1)] * r))

    def is_trivial(self) -> bool:
        return (
            len(self.factors) == 1
            and self.factors[0].phi.is_zero()
            and all(a == 0 and s == 1 for a, s in self.factors[0].reg.blocks)
        )

    def __repr__(self):
        return "Type{" + ", ".join(repr(f) for f in self.factors) + "}"


@dataclass(frozen=True)
class Problem:
    """Formal data of a connection: one FormalType per singular point,
    common total rank, quasi-unipotency order N."""

    N: int
    points: tuple[tuple[Location, FormalType], ...]

    @staticmethod
    def make(N: int, points) -> "Problem":
        pts = [(Location.of(loc) if not isinstance(loc, Location) else loc, t) for loc, t in points]
        for i, (a, _) in enumerate(pts):
            for b, _ in pts[i + 1:]:
                if a == b:
                    raise FormalError(f"duplicate location {a!r}")
        ranks = {rank(t) for _, t in pts}
        if len(ranks) > 1:
            raise FormalError(f"rank mismatch across points: {sorted(ranks)}")
        if not pts:
            raise FormalError("a problem needs at least one point")
        pts.sort(key=lambda pt: pt[0].sort_key())
        return Problem(int(N), tuple(pts))

    def rank(self) -> int:
        return rank(self.points[0][1])

    def at(self, loc: Location) -> FormalType | None:
        for l, t in self.points:
            if l == loc:
                return t
        return None

    def locations(self) -> list[Location]:
        return [l for l, _ in self.points]

    def with_point(self, loc: Location, t: FormalType) -> "Problem":
        pts = [(l, tt) for l, tt in self.points if not l == loc]
        pts.append((loc, t))
        return Problem.make(self.N, pts)

    def drop_point(self, loc: Location) -> "Problem":
        pts = [(l, tt) for l, tt in self.points if not l == loc]
        return Problem.make(self.N, pts)

    def __eq__(self, other):
        if not isinstance(other, Problem):
            return NotImplemented
        if self.N != other.N or len(self.points) != len(other.points):
            return False
        for (l1, t1), (l2, t2) in zip(self.points, other.points):
            if not (l1 == l2 and types_equal(t1, t2)):
                return False
        return True

    __hash__ = None


def types_equal(a: FormalType, b: FormalType) -> bool:
    if len(a.factors) != len(b.factors):
        return False
    return all(
        f.phi == g.phi and f.reg.blocks == g.reg.blocks
        for f, g in zip(a.factors, b.factors)
    )


# -- operations ------------------------------------------------------


def rank(t: FormalType) -> int:
    return sum(f.rank() for f in t.factors)


def irregularity(t: FormalType) -> int:
    """Sum of slopes with multiplicity; an integer."""
    total = Fraction(0)
    for f in t.factors:
        total += slope(f.phi) * f.rank()
    assert total.denominator == 1
    return int(total)


def monodromy_exponents(t: FormalType) -> list[Fraction]:
    out = []
    for f in t.factors:
        p = f.phi.ram
        for a, s in f.reg.blocks:
            for k in range(p):
                out.extend([_norm_exp(a + Fraction(k, p))] * s)
    out.sort()
    return out


def hom_irregularity(m: FormalType, nt: FormalType) -> int:
    """Irregularity of the horizontal-hom module, via the adjunction
    over the common ramification cover."""
    rams = [f.phi.ram for f in m.factors] + [f.phi.ram for f in nt.factors]
    e = math.lcm(*rams)
    total = 0
    for fi in m.factors:
        pi, ri = fi.phi.ram, fi.reg.rank()
        for fj in nt.factors:
            pj, rj = fj.phi.ram, fj.reg.rank()
            for s in range(pi):
                phi_s = galois_act(fi.phi, s)
                for s2 in range(pj):
                    psi_s2 = galois_act(fj.phi, s2)
                    total += ri * rj * diff_pole_order(phi_s, psi_s2, level=e)
    assert total % e == 0, "hom irregularity must be integral"
    return total // e


def hom_h0(m: FormalType, nt: FormalType) -> int:
    """Dimension of horizontal homs between the formal modules."""
    total = 0
    for fi in m.factors:
        for fj in nt.factors:
            if not fi.phi == fj.phi:
                continue
            p = fi.phi.ram
            for a, k in fi.reg.blocks:
                for b, l in fj.reg.blocks:
                    if _norm_exp(p * (a - b)) == 0:
                        total += min(k, l)
    return total


def twist_local(t: FormalType, psi: PolarPart, b) -> FormalType:
    """Tensor by the rank-one datum (psi, exponent shift b)."""
    out = []
    for f in t.factors:
        new_phi = polar_add(f.phi, psi)
        out.append((new_phi, f.reg.shifted(b)))
    return FormalType.make(out)


def is_quasi_unipotent(p: Problem) -> bool:
    for _, t in p.points:
        for a in monodromy_exponents(t):
            if (a * p.N).denominator != 1:
                return False
    return True
