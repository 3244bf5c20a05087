"""Global transforms on formal data: rank-one twist, Fourier transform
via local stationary phase, middle convolution, and the tame matrix
oracle.

Kernel convention: e^{-t tau} throughout; the inverse transform is the
same engine composed with the coordinate sign flip t -> -t.

Each stationary-phase leg builds the critical-point equation
s(z) = d(phi)/dt on the ramified cover, inverts it by Newton iteration
(solve_series), substitutes back into phi(t) - t*tau and keeps the
polar part of the critical value.  Regular-part data (exponents mod 1
and Jordan block sizes) pass through unchanged: for the slope-zero legs
this is the exact operator computation t@ - a  ->  tau@ + (a+1), which
is the identity modulo 1; for ramified legs the same rule is used and
is guarded by the rigidity-preservation and oracle cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNum
from .formal import (
    INF,
    ExpFactor,
    FormalType,
    Location,
    Problem,
    RegularPart,
    irregularity,
    monodromy_exponents,
    twist_local,
)
from .linalg import (
    Matrix,
    identity,
    jordan_blocks,
    kernel_basis,
    mat_inv,
    mat_mul,
    mat_sub,
    quotient_action,
    zeros,
)
from .puiseux import Lser, PolarPart, ceq, cmul, slope, solve_series
from .rigidity import rig_index


class TransformsError(Exception):
    pass


class SlopeLegMismatch(TransformsError):
    pass


class RankZeroOutput(TransformsError):
    pass


class NotLocalizedAtInfinity(TransformsError):
    """Raised when the caller marks the input as carrying a middle
    correction at infinity; formal data alone cannot detect this."""


class UnknownLocation(TransformsError):
    pass


class TrivialChi(TransformsError):
    pass


class NotScalarAtInfinity(TransformsError):
    pass


class DegenerateQuotient(TransformsError):
    pass


# -- rank-one twist data ---------------------------------------------


@dataclass(frozen=True)
class RankOneData:
    """Rank-one twist: per location an unramified polar part psi and an
    exponent shift b (mod 1)."""

    points: tuple  # ((Location, PolarPart, Fraction), ...)

    @staticmethod
    def make(points) -> "RankOneData":
        out = []
        for loc, psi, b in points:
            loc = Location.of(loc) if not isinstance(loc, Location) else loc
            if psi.ram != 1:
                raise TransformsError("rank-one twist data must be unramified")
            out.append((loc, psi, Fraction(b) % 1))
        return RankOneData(tuple(out))

    def is_trivial(self) -> bool:
        return all(psi.is_zero() and b == 0 for _, psi, b in self.points)

    def inverse(self) -> "RankOneData":
        from .puiseux import polar_neg

        return RankOneData(tuple((loc, polar_neg(psi), (-b) % 1) for loc, psi, b in self.points))


def twist_global(P: Problem, L: RankOneData) -> Problem:
    for loc, psi, b in L.points:
        t = P.at(loc)
        if t is None:
            raise UnknownLocation(f"twist at non-singular location {loc!r}")
        P = P.with_point(loc, twist_local(t, psi, b))
    return P


# -- stationary-phase legs -------------------------------------------

_BIG = 10**6  # truncation marker for exact Laurent polynomials


def _critical_value_polar(phi_terms, p: int, tail_exp: int, m: int, order: int) -> dict:
    """Polar part (in w, negative exponents) of phi(u(w)) - u(w)^tail_exp * w^m,
    where u solves s(u) = w^m for the given leg's s."""
    S = Lser({k: c for k, c in _s_terms(phi_terms, p, tail_exp)}, _BIG)
    u = solve_series(S, m, order)
    W = Lser({}, _BIG)
    for j, a in phi_terms:
        W = W + u.pow(-j).scale(a)
    W = W - u.pow(tail_exp) * Lser.monomial(m, CycloNum.one(), _BIG)
    assert W.trunc >= 1, "stationary-phase series under-resolved"
    return {-k: c for k, c in W.terms.items() if k < 0}


def _s_terms(phi_terms, p: int, tail_exp: int):
    """Terms of s(z) = d phi / dt on the cover t = z^tail_exp
    (tail_exp = p at a finite point, -p at infinity)."""
    sign = Fraction(-1) if tail_exp > 0 else Fraction(1)
    return [(-j + (-p if tail_exp > 0 else p), cmul(a, sign * Fraction(j, p))) for j, a in phi_terms]


def _audited_polar(phi_terms, p, tail_exp, m, out_ram, order) -> PolarPart:
    """Run the inversion at two truncations; the polar parts must agree."""
    d1 = _critical_value_polar(phi_terms, p, tail_exp, m, order)
    d2 = _critical_value_polar(phi_terms, p, tail_exp, m, 2 * order)
    keys = set(d1) | set(d2)
    zero = CycloNum.zero()
    assert all(ceq(d1.get(k, zero), d2.get(k, zero)) for k in keys), (
        "truncation audit failed in stationary phase"
    )
    return PolarPart.make(out_ram, d2)


def finite_to_inf(x: CycloNum, f: ExpFactor) -> ExpFactor:
    """Leg at a finite point x: contributes at tau = infinity."""
    phi = f.phi
    if phi.is_zero():
        polar = PolarPart.make(1, [(1, -x)])
        return ExpFactor(polar, f.reg)
    p = phi.ram
    q = phi.terms[0][0]
    polar = _audited_polar(list(phi.terms), p, p, -(p + q), p + q, p + q + 2)
    # the -x*t part of the exponent: -x*tau, i.e. numerator p+q at ram p+q
    polar = _polar_with_head(polar, p + q, -x)
    return ExpFactor(polar, f.reg)


def inf_to_inf(f: ExpFactor) -> ExpFactor:
    """Leg at infinity with slope > 1: contributes at tau = infinity."""
    phi = f.phi
    if slope(phi) <= 1:
        raise SlopeLegMismatch(f"inf_to_inf needs slope > 1, got {slope(phi)}")
    p = phi.ram
    q = phi.terms[0][0]
    polar = _audited_polar(list(phi.terms), p, -p, p - q, q - p, q + 2)
    return ExpFactor(polar, f.reg)


def inf_to_finite(f: ExpFactor) -> tuple[CycloNum, ExpFactor]:
    """Leg at infinity with slope <= 1: contributes vanishing data at
    the finite point tau = c, c the coefficient of the linear head c*t."""
    phi = f.phi
    if slope(phi) > 1:
        raise SlopeLegMismatch(f"inf_to_finite needs slope <= 1, got {slope(phi)}")
    p = phi.ram
    c = phi.coeff(p)
    if not isinstance(c, CycloNum):
        raise TransformsError("linear head is not cyclotomic; cannot name the target point")
    tail = [(j, a) for j, a in phi.terms if j != p]
    if not tail:
        return c, ExpFactor(PolarPart.zero(), f.reg)
    qt = max(j for j, _ in tail)
    polar = _audited_polar(tail, p, -p, p - qt, p - qt, p + qt + 2)
    return c, ExpFactor(polar, f.reg)


def local_fourier(leg: str, f: ExpFactor, point=None):
    if leg == "finite_to_inf":
        x = point if isinstance(point, CycloNum) else CycloNum.from_rational(Fraction(point))
        return finite_to_inf(x, f)
    if leg == "inf_to_inf":
        return inf_to_inf(f)
    if leg == "inf_to_finite":
        return inf_to_finite(f)
    raise SlopeLegMismatch(f"unknown leg {leg!r}")


def _polar_with_head(polar: PolarPart, ram: int, c) -> PolarPart:
    """Add c * t (numerator = ram at level ram) to a polar part given at
    exactly that ramification level."""
    from .radicals import cis_zero

    if cis_zero(c):
        return polar
    assert ram % polar.ram == 0
    s = ram // polar.ram
    terms = [(j * s, a) for j, a in polar.terms] + [(ram, c)]
    return PolarPart.make(ram, terms)


# -- vanishing cycles and reconstruction -----------------------------


def vc_factors(t: FormalType) -> list[ExpFactor]:
    """Middle-extension correction at a finite point: shrink every
    exponent-0 block of the slope-0 factor by one."""
    out = []
    for f in t.factors:
        if f.phi.is_zero():
            blocks = [(a, k - 1 if a == 0 else k) for a, k in f.reg.blocks]
            blocks = [(a, k) for a, k in blocks if k > 0]
            if blocks:
                out.append(ExpFactor(f.phi, RegularPart.make(blocks)))
        else:
            out.append(f)
    return out


def reconstruct_type(vanishing: list[ExpFactor], r: int) -> FormalType:
    """Inverse of vc at a finite output point: grow exponent-0 blocks of
    the slope-0 part by one and pad with unit blocks up to full rank."""
    v = sum(f.rank() for f in vanishing)
    grown = []
    z = 0
    has_zero_phi = False
    for f in vanishing:
        if f.phi.is_zero():
            has_zero_phi = True
            blocks = []
            for a, k in f.reg.blocks:
                if a == 0:
                    z += 1
                    blocks.append((a, k + 1))
                else:
                    blocks.append((a, k))
            grown.append((f.phi, blocks))
        else:
            grown.append((f.phi, list(f.reg.blocks)))
    m = r - v - z
    if m < 0:
        raise TransformsError("vanishing data exceed the ambient rank")
    if m > 0:
        if has_zero_phi:
            for i, (phi, blocks) in enumerate(grown):
                if phi.is_zero():
                    grown[i] = (phi, blocks + [(Fraction(0), 1)] * m)
                    break
        else:
            grown.append((PolarPart.zero(), [(Fraction(0), 1)] * m))
    return FormalType.make([(phi, RegularPart.make(b)) for phi, b in grown])


# -- global Fourier transform ----------------------------------------


def _quasi_order(points) -> int:
    n = 1
    for _, t in points:
        for a in monodromy_exponents(t):
            n = math.lcm(n, a.denominator)
    return n


def fourier_global(P: Problem) -> Problem:
    """Fourier transform of the formal data of an irreducible middle
    extension, localized at infinity."""
    r = P.rank()
    inf_factors: list[ExpFactor] = []
    vanishing: list[tuple[Location, ExpFactor]] = []
    finite_defect = 0  # for the rank cross-check
    for loc, t in P.points:
        if loc.is_inf:
            continue
        z = sum(
            1
            for f in t.factors
            if f.phi.is_zero()
            for a, _ in f.reg.blocks
            if a == 0
        )
        finite_defect += irregularity(t) + r - z
        for f in vc_factors(t):
            inf_factors.append(finite_to_inf(loc.value, f))
    tinf = P.at(INF) or FormalType.trivial(r)
    steep_defect = 0
    for f in tinf.factors:
        if slope(f.phi) > 1:
            inf_factors.append(inf_to_inf(f))
            steep_defect += int(slope(f.phi) * f.rank()) - f.rank()
        else:
            c, g = inf_to_finite(f)
            vanishing.append((Location.of(c), g))
    rp = sum(f.rank() for f in inf_factors)
    if rp == 0:
        raise RankZeroOutput("transform of a successive extension of exponentials")
    assert rp == finite_defect + steep_defect, "leg ranks disagree with the rank formula"

    new_points: list[tuple[Location, FormalType]] = [(INF, FormalType.make(inf_factors))]
    groups: list[tuple[Location, list[ExpFactor]]] = []
    for loc, g in vanishing:
        for loc2, gs in groups:
            if loc == loc2:
                gs.append(g)
                break
        else:
            groups.append((loc, [g]))
    for loc, gs in groups:
        t = reconstruct_type(gs, rp)
        if not t.is_trivial():
            new_points.append((loc, t))
    n2 = math.lcm(P.N, _quasi_order(new_points))
    return Problem.make(n2, new_points)


def negate_polar(phi: PolarPart) -> PolarPart:
    """Pullback under t -> -t (one branch on the cover; canonical form
    downstream removes the branch choice)."""
    p = phi.ram
    terms = [(j, cmul(c, CycloNum.zeta(2 * p, j % (2 * p)))) for j, c in phi.terms]
    return PolarPart.make(p, terms)


def negate_problem(P: Problem) -> Problem:
    pts = []
    for loc, t in P.points:
        new_loc = INF if loc.is_inf else Location.of(-loc.value)
        pts.append((new_loc, FormalType.make([(negate_polar(f.phi), f.reg) for f in t.factors])))
    return Problem.make(P.N, pts)


def fourier_inverse(P: Problem) -> Problem:
    """Kernel e^{+t tau}: the inverse of fourier_global."""
    return negate_problem(fourier_global(P))


# -- middle convolution ----------------------------------------------


def _scalar_exponent_at_inf(t: FormalType) -> Fraction | None:
    """The exponent when t is regular scalar (all blocks size 1, one
    exponent); None otherwise."""
    if len(t.factors) != 1 or not t.factors[0].phi.is_zero():
        return None
    exps = {a for a, _ in t.factors[0].reg.blocks}
    sizes = {k for _, k in t.factors[0].reg.blocks}
    if len(exps) == 1 and sizes == {1}:
        return next(iter(exps))
    return None


def _zero_slope_blocks_with_exponent(t: FormalType, e: Fraction) -> int:
    e = Fraction(e) % 1
    return sum(
        1
        for f in t.factors
        if f.phi.is_zero()
        for a, _ in f.reg.blocks
        if a == e
    )


def mc_rank_prediction(P: Problem, chi_exponent) -> int:
    """r' = sum over finite x of (Irr_x + r - z_x(1))
          + (Irr_inf + r - z_inf(chi)) - r."""
    g = Fraction(chi_exponent) % 1
    r = P.rank()
    total = 0
    seen_inf = False
    for loc, t in P.points:
        if loc.is_inf:
            seen_inf = True
            total += irregularity(t) + r - _zero_slope_blocks_with_exponent(t, g)
        else:
            total += irregularity(t) + r - _zero_slope_blocks_with_exponent(t, Fraction(0))
    if not seen_inf:
        total += r  # trivial data at infinity: Irr 0, z(chi) = 0 for chi != 1
    return total - r


def _finite_irregular_values(P: Problem):
    out = []
    for loc, t in P.points:
        if loc.is_inf:
            continue
        for f in t.factors:
            if not f.phi.is_zero():
                out.append((loc.sort_key(), f.phi.sort_key()))
    out.sort()
    return out


def middle_convolution(P: Problem, chi_exponent) -> Problem:
    """MC_chi via Fourier, Kummer twist at {0, inf} of the dual line,
    inverse Fourier."""
    g = Fraction(chi_exponent) % 1
    if g == 0:
        raise TrivialChi("middle convolution with the trivial character")
    tinf = P.at(INF) or FormalType.trivial(P.rank())
    if any(not f.phi.is_zero() for f in tinf.factors):
        raise NotScalarAtInfinity("infinity must be regular; twist the polar part away first")
    # scalar monodromy at infinity is the textbook situation; the engine
    # is exact for any regular infinity, and the chi^{-1} bullet below is
    # asserted whenever the scalar hypothesis actually holds
    scalar_inf = _scalar_exponent_at_inf(tinf)
    predicted = mc_rank_prediction(P, g)

    P1 = fourier_global(P)
    zero = Location.of(0)
    if P1.at(zero) is None:
        P1 = P1.with_point(zero, FormalType.trivial(P1.rank()))
    kummer = RankOneData.make([(zero, PolarPart.zero(), -g), (INF, PolarPart.zero(), g)])
    P2 = twist_global(P1, kummer)
    if P2.at(zero).is_trivial():
        P2 = P2.drop_point(zero)
    out = fourier_inverse(P2)
    n2 = math.lcm(P.N, g.denominator)
    out = Problem.make(math.lcm(n2, _quasi_order(out.points)), out.points)

    assert out.rank() == predicted, "middle convolution rank formula violated"
    assert rig_index(out) == rig_index(P), "middle convolution must preserve rigidity index"
    assert _finite_irregular_values(out) == _finite_irregular_values(P), (
        "middle convolution must preserve finite irregular values"
    )
    tinf_out = out.at(INF) or FormalType.trivial(out.rank())
    for f in tinf_out.factors:
        assert f.phi.is_zero(), "middle convolution output must be regular at infinity"
    if scalar_inf == g:
        assert _scalar_exponent_at_inf(tinf_out) == (-g) % 1, (
            "output at infinity must be scalar chi^{-1}"
        )
    return out


# -- matrix-level oracle (tame case) ---------------------------------


@dataclass(frozen=True)
class MatrixTuple:
    """Monodromy tuple (A_1..A_n) at chosen finite points; the infinity
    monodromy is (A_n ... A_1)^{-1}."""

    r: int
    matrices: tuple

    @staticmethod
    def make(matrices) -> "MatrixTuple":
        ms = tuple(tuple(tuple(row) for row in m) for m in matrices)
        if not ms:
            raise TransformsError("empty tuple")
        r = len(ms[0])
        return MatrixTuple(r, ms)

    def mats(self) -> list[Matrix]:
        return [[list(row) for row in m] for m in self.matrices]

    def inf_monodromy(self) -> Matrix:
        prod = identity(self.r)
        for m in self.mats():
            prod = mat_mul(m, prod)
        return mat_inv(prod)


def dr_mc_oracle(T: MatrixTuple, lam: CycloNum) -> MatrixTuple:
    """Middle convolution on monodromy tuples (the Dettweiler-Reiter
    construction): B_k = I + E_k on W = V^n, then quotient by K + L."""
    if lam.is_zero():
        raise TransformsError("lambda must be nonzero")
    mats = T.mats()
    n, r = len(mats), T.r
    big = n * r
    eye = identity(r)
    bs: list[Matrix] = []
    for k in range(n):
        b = identity(big)
        for j in range(n):
            blk = mat_sub(mats[j], eye)
            if j == k:
                blk = mat_sub([[lam * x for x in row] for row in mats[k]], eye)
            elif j > k:
                blk = [[lam * x for x in row] for row in blk]
            for i in range(r):
                for i2 in range(r):
                    b[k * r + i][j * r + i2] = b[k * r + i][j * r + i2] + blk[i][i2]
        bs.append(b)
    sub: list[list[CycloNum]] = []
    for j in range(n):
        for v in kernel_basis(mat_sub(mats[j], eye)):
            w = [CycloNum.zero()] * big
            w[j * r:(j + 1) * r] = v
            sub.append(w)
    stacked = []
    for b in bs:
        stacked.extend(mat_sub(b, identity(big)))
    sub.extend(kernel_basis(stacked))
    dim, induced = quotient_action(bs, sub)
    if dim == 0:
        raise DegenerateQuotient("middle convolution quotient is zero")
    return MatrixTuple.make(induced)


def tuple_formal_data(T: MatrixTuple, locations, N: int) -> Problem:
    """Formal (tame) data of a monodromy tuple: Jordan structure at each
    finite location and at infinity, eigenvalues in mu_N."""
    candidates = [CycloNum.zeta(N, k) for k in range(N)]
    pts = []
    ms = T.mats() + [T.inf_monodromy()]
    locs = [Location.of(l) if not isinstance(l, Location) else l for l in locations] + [INF]
    if len(locs) != len(ms):
        raise TransformsError("location count mismatch")
    for loc, m in zip(locs, ms):
        blocks = []
        for lam, sizes in jordan_blocks(m, candidates):
            k = next(i for i in range(N) if lam == CycloNum.zeta(N, i))
            blocks.extend([(Fraction(k, N), s) for s in sizes])
        pts.append((loc, FormalType.regular(RegularPart.make(blocks))))
    return Problem.make(N, pts)
