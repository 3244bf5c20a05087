"""The reduction loop: normalization, case analysis, greedy
rank-decreasing steps, certificates and replay.

A run alternates normalize_problem (Moebius position, apparent
singularities) with reduce_step (Twist+MC when infinity is unramified,
Twist+Fourier when a ramified factor sits at infinity) until rank one.
The recorded Certificate replays backwards by inverse steps.
"""

from __future__ import annotations

import itertools
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
    twist_local,
    types_equal,
)
from .puiseux import (
    Lser,
    PolarPart,
    cinv,
    cmul,
    croot,
    polar_neg,
    slope,
    solve_series,
    unramified_head,
)
from .rigidity import rig_index
from .transforms import (
    RankOneData,
    TransformsError,
    fourier_global,
    fourier_inverse,
    mc_rank_prediction,
    middle_convolution,
    twist_global,
)


class AdkError(Exception):
    pass


class TwoSpecialPoints(AdkError):
    pass


class PreconditionRig(AdkError):
    pass


class ReplayMismatch(AdkError):
    def __init__(self, diff: str):
        super().__init__(diff)
        self.diff = diff


# -- step / certificate types ----------------------------------------


@dataclass(frozen=True)
class Step:
    kind: str  # moebius | add_apparent | twist | mc | fourier
    data: object
    predicted_rank: int


@dataclass(frozen=True)
class Certificate:
    steps: tuple[Step, ...]
    terminal: Problem
    origin: Problem  # starting problem; replay must land exactly here


@dataclass(frozen=True)
class NotRigid:
    reason: str
    stuck_at_rig2: bool = False  # greedy search failed though rig = 2


@dataclass(frozen=True)
class Undecided:
    reason: str


@dataclass(frozen=True)
class Stuck:
    rank: int


# -- Moebius transport -----------------------------------------------


def _binom_pow(h: Lser, e: Fraction, order: int) -> Lser:
    """(1 + h)^e for h of positive valuation, to the given order."""
    acc = Lser.const(CycloNum.one(), order)
    term = Lser.const(CycloNum.one(), order)
    k = 0
    while True:
        k += 1
        term = (term * h).scale(Fraction(e - k + 1, k))
        if term.is_zero() or term.valuation() >= order:
            break
        acc = acc + term
    return acc


def moebius_coeffs(s_inf: Location, s0: Location, s1: Location | None):
    """(a, b, c, d) for the map sending s_inf to infinity, s0 to 0, and
    (when given) s1 to 1."""
    one = CycloNum.one()
    zero = CycloNum.zero()
    if s_inf.is_inf:
        if s1 is None:
            return one, -s0.value, zero, one  # translation
        return one, -s0.value, zero, s1.value - s0.value
    xs = s_inf.value
    if s0.is_inf:
        # pole at xs, zero at infinity
        k = (s1.value - xs) if s1 is not None else one
        return zero, k, one, -xs
    if s1 is None:
        return one, -s0.value, one, -xs
    if s1.is_inf:
        return one, -s0.value, one, -xs
    k = (s1.value - xs) * (s1.value - s0.value).inv()
    return k, -k * s0.value, one, -xs


def moebius_apply_loc(loc: Location, a, b, c, d) -> Location:
    if loc.is_inf:
        if c.is_zero():
            return INF
        return Location.of(a * c.inv())
    den = c * loc.value + d
    if den.is_zero():
        return INF
    return Location.of((a * loc.value + b) * den.inv())


def _transport_polar(phi: PolarPart, src: Location, dst: Location, a, b, c, d) -> PolarPart:
    """Polar part in the local coordinate at the image point."""
    if phi.is_zero():
        return phi
    p = phi.ram
    q = phi.terms[0][0]
    order = q + p + 4
    big = order + p + 2  # all series here are only ever consumed to this order
    if src.is_inf:
        t = Lser({-p: CycloNum.one()}, big)
    else:
        t = Lser({0: src.value, p: CycloNum.one()}, big)
    num = t.scale(a) + Lser.const(b, big)
    den = t.scale(c) + Lser.const(d, big)
    if dst.is_inf:
        w = den * num.inverse()
    else:
        w = (num - den.scale(dst.value)) * den.inverse()
    assert w.valuation() == p, "Moebius image coordinate must vanish to order p"
    u0 = w.terms[p]
    rest = w.shift(-p).scale(cinv(u0)) - Lser.const(CycloNum.one(), big)
    zprime = (_binom_pow(rest, Fraction(1, p), order).scale(croot(u0, p))).shift(1)
    zser = solve_series(Lser(zprime.terms, order + 1), 1, order)
    out = Lser({}, big)
    for j, coeff in phi.terms:
        out = out + zser.pow(-j).scale(coeff)
    assert out.trunc >= 1, "Moebius transport under-resolved"
    return PolarPart.make(p, {-k: cc for k, cc in out.terms.items() if k < 0})


def apply_moebius(P: Problem, a, b, c, d) -> Problem:
    pts = []
    for loc, t in P.points:
        dst = moebius_apply_loc(loc, a, b, c, d)
        factors = [(_transport_polar(f.phi, loc, dst, a, b, c, d), f.reg) for f in t.factors]
        pts.append((dst, FormalType.make(factors)))
    return Problem.make(P.N, pts)


def _invert_coeffs(a, b, c, d):
    return d, -b, -c, a


# -- normalization ---------------------------------------------------


def _special_locations(P: Problem) -> list[Location]:
    return [loc for loc, t in P.points if any(f.phi.ram >= 2 for f in t.factors)]


def _apparent_location_candidates():
    yield Location.of(0)
    yield Location.of(1)
    k = 1
    while True:
        yield Location.of(-k)
        k += 1
        yield Location.of(k)


def normalize_problem(P: Problem) -> tuple[Problem, list[Step]]:
    special = _special_locations(P)
    if len(special) >= 2:
        raise TwoSpecialPoints(f"ramified factors at {special[0]!r} and {special[1]!r}")
    steps: list[Step] = []
    r = P.rank()

    locs = P.locations()
    s_inf = special[0] if special else (INF if any(l.is_inf for l in locs) else None)
    finite_others = [l for l in locs if not l == s_inf and not l.is_inf]
    if s_inf is not None and not s_inf.is_inf and any(l.is_inf for l in locs):
        finite_others.append(INF)  # old infinity becomes a finite point

    needs_move = s_inf is not None and not s_inf.is_inf
    zero, one = Location.of(0), Location.of(1)
    if not needs_move:
        have_01 = any(l == zero for l in locs) and any(l == one for l in locs)
        if s_inf is not None and have_01:
            pass  # already normalized, no Moebius
        elif s_inf is not None:
            pass  # infinity fine; 0/1 filled in by apparent points below
        # s_inf None: infinity not singular; made apparent below
    else:
        # choose destinations for 0 and 1 among the other singular points,
        # preferring to keep 0 and 1 where they are
        others = [l for l in P.locations() if not l == s_inf]
        ordered = sorted(others, key=lambda l: l.sort_key())
        preferred = [l for l in ordered if l == zero] + [l for l in ordered if l == one]
        rest = [l for l in ordered if not (l == zero or l == one)]
        ordered = preferred + rest
        s0 = ordered[0] if ordered else None
        s1 = ordered[1] if len(ordered) > 1 else None
        if s0 is None:
            # single-point problem: plain shift of the special point
            a, b, c, d = moebius_coeffs(s_inf, Location.of(0), None)
        else:
            a, b, c, d = moebius_coeffs(s_inf, s0, s1)
        P = apply_moebius(P, a, b, c, d)
        steps.append(Step("moebius", (a, b, c, d), r))

    for cand in _apparent_location_candidates():
        if len(P.points) >= 3 and P.at(zero) is not None and P.at(one) is not None:
            break
        if P.at(cand) is None:
            P = P.with_point(cand, FormalType.trivial(r))
            steps.append(Step("add_apparent", cand, r))
    if P.at(INF) is None:
        P = P.with_point(INF, FormalType.trivial(r))
        steps.append(Step("add_apparent", INF, r))
    return P, steps


# -- reduction step --------------------------------------------------


def _exponents_at(t: FormalType) -> list[Fraction]:
    out = []
    for f in t.factors:
        for a, _ in f.reg.blocks:
            if a not in out:
                out.append(a)
    return sorted(out)


def _unramified_heads(t: FormalType) -> list[PolarPart]:
    out = []
    for f in t.factors:
        if not f.phi.is_zero():
            h = unramified_head(f.phi)
            if not h.is_zero() and not any(h == g for g in out):
                out.append(h)
    out.sort(key=lambda g: g.sort_key())
    return out


def fourier_rank_prediction(P: Problem) -> int:
    from .transforms import _zero_slope_blocks_with_exponent

    r = P.rank()
    total = 0
    for loc, t in P.points:
        if loc.is_inf:
            for f in t.factors:
                if slope(f.phi) > 1:
                    total += irregularity(FormalType.make([f])) - f.rank()
        else:
            total += irregularity(t) + r - _zero_slope_blocks_with_exponent(t, Fraction(0))
    return total


def reduce_step(P: Problem):
    """One compound rank-decreasing move, or Stuck."""
    if rig_index(P) != 2:
        raise PreconditionRig(f"rig_index = {rig_index(P)}")
    r = P.rank()
    assert r >= 2
    tinf = P.at(INF) or FormalType.trivial(r)
    ramified_at_inf = any(f.phi.ram >= 2 for f in tinf.factors)
    if ramified_at_inf:
        return _reduce_case_b(P, tinf, r)
    return _reduce_case_a(P, tinf, r)


def _finite_candidates(P: Problem):
    """Per finite point: (location, [(psi, alpha), ...]) in canonical order."""
    out = []
    for loc, t in P.points:
        if loc.is_inf:
            continue
        psis = [PolarPart.zero()] + [polar_neg(h) for h in _unramified_heads(t)]
        alphas = sorted({(-a) % 1 for a in _exponents_at(t)})
        out.append((loc, [(psi, al) for psi in psis for al in alphas]))
    return out


def _reduce_case_a(P: Problem, tinf: FormalType, r: int):
    finite = _finite_candidates(P)
    inf_psis = [PolarPart.zero()] + [polar_neg(h) for h in _unramified_heads(tinf)]
    for combo in itertools.product(*[opts for _, opts in finite]):
        b_inf = (-sum((al for _, al in combo), Fraction(0))) % 1
        for psi_inf in inf_psis:
            twist_pts = [
                (loc, psi, al)
                for (loc, _), (psi, al) in zip(finite, combo)
            ] + [(INF, psi_inf, b_inf)]
            L = RankOneData.make(twist_pts)
            Pt = twist_global(P, L)
            tinf_t = Pt.at(INF)
            if any(not f.phi.is_zero() for f in tinf_t.factors):
                continue  # infinity polar part not cancelled; MC inapplicable
            gammas = [g for g in _exponents_at(tinf_t) if g != 0]
            if _scalar_candidate(tinf_t) is None and b_inf != 0:
                pass
            for g in sorted(gammas):
                predicted = mc_rank_prediction(Pt, g)
                if predicted < r:
                    steps = []
                    if not L.is_trivial():
                        steps.append(Step("twist", L, r))
                    out = middle_convolution(Pt, g)
                    steps.append(Step("mc", g, out.rank()))
                    return out, steps
    return Stuck(r)


def _scalar_candidate(t: FormalType):
    exps = _exponents_at(t)
    return exps[0] if len(exps) == 1 else None


def _reduce_case_b(P: Problem, tinf: FormalType, r: int):
    # twist away the integral-exponent head of a ramified factor, then Fourier
    heads = [PolarPart.zero()]
    for f in tinf.factors:
        if f.phi.ram >= 2:
            h = unramified_head(f.phi)
            if not h.is_zero() and not any(h == g for g in heads):
                heads.append(h)
    heads_sorted = [heads[0]] + sorted(heads[1:], key=lambda g: g.sort_key())
    shifts = [Fraction(0)] + sorted({(-a) % 1 for a in _exponents_at(tinf) if a != 0})
    best = None
    for psi0 in heads_sorted:
        psi = polar_neg(psi0) if not psi0.is_zero() else psi0
        for b in shifts:
            L = RankOneData.make([(INF, psi, b)])
            Pt = twist_global(P, L)
            predicted = fourier_rank_prediction(Pt)
            if predicted < r and (best is None or predicted < best[0]):
                best = (predicted, L, Pt)
    if best is None:
        return Stuck(r)
    predicted, L, Pt = best
    steps = []
    if not L.is_trivial():
        steps.append(Step("twist", L, r))
    out = fourier_global(Pt)
    assert out.rank() == predicted, "Fourier rank prediction violated"
    steps.append(Step("fourier", None, out.rank()))
    return out, steps


# -- driver ----------------------------------------------------------


def run_adk(P: Problem, max_steps: int = 64):
    if rig_index(P) != 2:
        return NotRigid(f"rig_index = {rig_index(P)}")
    steps: list[Step] = []
    cur = P
    r0 = P.rank()
    compound = 0
    while cur.rank() >= 2:
        if len(steps) >= max_steps:
            return Undecided(f"step budget {max_steps} exhausted at rank {cur.rank()}")
        if rig_index(cur) != 2:
            return NotRigid(f"rig_index = {rig_index(cur)} after {len(steps)} steps")
        try:
            cur, norm_steps = normalize_problem(cur)
        except TwoSpecialPoints as e:
            return NotRigid(f"two special points: {e}")
        steps.extend(norm_steps)
        res = reduce_step(cur)
        if isinstance(res, Stuck):
            return NotRigid(
                f"no rank-decreasing candidate at rank {res.rank}", stuck_at_rig2=True
            )
        cur, red_steps = res
        steps.extend(red_steps)
        compound += 1
        assert rig_index(cur) == 2, "rigidity index must stay 2 along a successful run"
        assert compound <= r0 - 1, "too many compound steps for the starting rank"
    return Certificate(tuple(steps), cur, P)


# -- replay ----------------------------------------------------------


def _undo_step(P: Problem, step: Step) -> Problem:
    if step.kind == "moebius":
        a, b, c, d = step.data
        return apply_moebius(P, *_invert_coeffs(a, b, c, d))
    if step.kind == "add_apparent":
        loc = step.data
        t = P.at(loc)
        if t is None:
            return P  # the apparent point evaporated through a transform round
        if not t.is_trivial():
            raise ReplayMismatch(f"apparent singularity at {loc!r} is not trivial on replay")
        return P.drop_point(loc)
    if step.kind == "twist":
        return twist_global(P, step.data.inverse())
    if step.kind == "mc":
        return middle_convolution(P, (-step.data) % 1)
    if step.kind == "fourier":
        return fourier_inverse(P)
    raise ReplayMismatch(f"unknown step kind {step.kind!r}")


def replay_certificate(C: Certificate) -> Problem:
    """Walk the certificate backwards with inverse steps; returns the
    reconstructed original problem."""
    cur = C.terminal
    if C.steps and C.steps[-1].predicted_rank != cur.rank():
        raise ReplayMismatch(
            f"terminal rank {cur.rank()} != recorded {C.steps[-1].predicted_rank}"
        )
    for i in range(len(C.steps) - 1, -1, -1):
        step = C.steps[i]
        if step.predicted_rank != cur.rank():
            raise ReplayMismatch(
                f"step {i} ({step.kind}): rank {cur.rank()} != recorded {step.predicted_rank}"
            )
        try:
            cur = _undo_step(cur, step)
        except (TransformsError, AssertionError) as e:
            raise ReplayMismatch(f"step {i} ({step.kind}) failed to invert: {e}") from e
        expect = C.steps[i - 1].predicted_rank if i > 0 else None
        if expect is not None and cur.rank() != expect:
            raise ReplayMismatch(
                f"after undoing step {i} ({step.kind}): rank {cur.rank()} != {expect}"
            )
    diff = _problem_diff(cur, C.origin)
    if diff is not None:
        raise ReplayMismatch("replayed problem differs from recorded origin: " + diff)
    return cur


def _problem_diff(got: Problem, want: Problem) -> str | None:
    """First discrepancy between the singular data of two problems, or
    None; N is ignored (it may grow along a legitimate round trip)."""
    locs_got, locs_want = got.locations(), want.locations()
    for loc in locs_want:
        if got.at(loc) is None:
            return f"missing point {loc!r}"
    for loc in locs_got:
        if want.at(loc) is None:
            return f"extra point {loc!r}"
    for loc in locs_want:
        tg, tw = got.at(loc), want.at(loc)
        if not types_equal(tg, tw):
            return f"at {loc!r}: {tg!r} != {tw!r}"
    return None
