"""Polar parts, Galois orbits, and certified series inversion."""

from fractions import Fraction

import pytest

from rigidconn.cyclo import CycloNum
from rigidconn.puiseux import (
    Lser,
    PolarPart,
    PuiseuxSeries,
    canonical_rep,
    galois_act,
    orbit,
    polar_add,
    polar_neg,
    ramify,
    slope,
    solve_series,
    invert_series,
)

F = Fraction
ONE = CycloNum.one()


def c(q) -> CycloNum:
    return CycloNum.from_rational(F(q))


def test_normal_form_reduces_ramification():
    # a_2 t^(-2/2) is really a_2 t^(-1)
    phi = PolarPart.make(2, [(2, c(3))])
    assert phi.ram == 1 and phi.terms == ((1, c(3)),)


def test_slope():
    assert slope(PolarPart.unramified({2: c(1)})) == 2
    assert slope(PolarPart.make(2, [(1, c(1))])) == F(1, 2)
    assert slope(PolarPart.make(3, [(4, c(1))])) == F(4, 3)


def test_galois_act_and_orbit():
    phi = PolarPart.make(2, [(1, c(1))])
    sigma = galois_act(phi, 1)
    assert sigma == PolarPart.make(2, [(1, c(-1))])
    assert galois_act(sigma, 1) == phi
    assert len(orbit(phi)) == 2
    assert len(orbit(PolarPart.unramified({1: c(5)}))) == 1


def test_canonical_rep_is_orbit_invariant():
    phi = PolarPart.make(2, [(1, c(1))])
    rep1, _ = canonical_rep(phi)
    rep2, _ = canonical_rep(galois_act(phi, 1))
    assert rep1 == rep2
    rep3, _ = canonical_rep(rep1)
    assert rep3 == rep1


def test_polar_add_neg():
    phi = PolarPart.unramified({1: c(2), 3: c(1)})
    assert polar_add(phi, polar_neg(phi)).is_zero()
    psi = PolarPart.make(2, [(1, c(1))])
    both = polar_add(phi, psi)
    assert both.ram == 2 and slope(both) == 3


def test_ramify_is_pullback():
    # pullback under t = u^3 turns t^(-1) into u^(-3)
    phi = PolarPart.unramified({1: c(2)})
    up = ramify(phi, 3)
    assert up == PolarPart.unramified({3: c(2)})
    assert slope(up) == 3


def test_lser_inverse():
    a = Lser({0: ONE, 1: c(1)}, 8)  # 1 + w
    inv = a.inverse()
    assert (a * inv) == Lser.const(ONE, 8)
    # geometric series coefficients
    assert inv.terms[3] == c(-1)


def test_solve_series_catalan():
    # w = u + u^2  =>  u = w - w^2 + 2 w^3 - 5 w^4 + ...
    S = Lser({1: ONE, 2: ONE}, 50)
    u = solve_series(S, 1, 6)
    assert u.terms[1] == ONE
    assert u.terms[2] == c(-1)
    assert u.terms[3] == c(2)
    assert u.terms[4] == c(-5)
    assert u.terms[5] == c(14)


def test_invert_series_square():
    # tau = z^2  =>  z = tau^(1/2)
    s = PuiseuxSeries(1, {2: ONE}, 40)
    z = invert_series(s, 3)
    assert z == PuiseuxSeries(2, {1: ONE}, 40)


def test_invert_series_identity():
    s = PuiseuxSeries(1, {1: ONE}, 40)
    z = invert_series(s, 3)
    assert z == PuiseuxSeries(1, {1: ONE}, 40)
