"""Radical-coefficient tower: roots, canonical monomials, embeddings."""

from fractions import Fraction

from rigidconn.cyclo import CycloNum
from rigidconn.radicals import (
    RadicalCoeff,
    cembed,
    ceq,
    cinv,
    cmul,
    cpow,
    croot,
    csort_key,
    rational_nth_root,
)

F = Fraction


def c(q) -> CycloNum:
    return CycloNum.from_rational(F(q))


def test_rational_nth_root():
    assert rational_nth_root(F(4), 2) == 2
    assert rational_nth_root(F(8, 27), 3) == F(2, 3)
    assert rational_nth_root(F(2), 2) is None


def test_square_root_squares_back():
    r = croot(c(2), 2)
    assert ceq(cmul(r, r), c(2))


def test_rational_radicand_stays_cyclotomic():
    assert ceq(croot(c(4), 2), c(2))
    assert ceq(croot(c(27), 3), c(3))


def test_prime_factored_radicands_multiply():
    # sqrt(2) * sqrt(3) = sqrt(6): canonical monomials over prime
    # radicands make this an identity, not two opaque generators
    assert ceq(cmul(croot(c(2), 2), croot(c(3), 2)), croot(c(6), 2))
    # sqrt(8) = 2 sqrt(2)
    assert ceq(croot(c(8), 2), cmul(c(2), croot(c(2), 2)))


def test_root_of_unity_factor():
    # cube root of -8 is 2 * zeta_6 (principal branch)
    r = croot(c(-8), 3)
    assert ceq(cpow(r, 3), c(-8))


def test_inverse_and_powers():
    r = croot(c(2), 2)
    assert ceq(cmul(r, cinv(r)), c(1))
    assert ceq(cpow(r, 4), c(4))
    assert ceq(cpow(r, -2), c(F(1, 2)))


def test_nested_product_collapses():
    # (g1 g2)^(1/2) with g1 g2 = 1/4 must collapse to the rational 1/2
    prod = cmul(croot(c(F(1, 2)), 2), croot(c(F(1, 2)), 2))
    assert ceq(prod, c(F(1, 2)))


def test_cembed_accuracy():
    b = cembed(croot(c(2), 2))
    assert abs(b.center - 2**0.5) <= b.radius + 1e-12


def test_sort_key_total_order():
    xs = [croot(c(3), 2), c(1), croot(c(2), 2), c(2)]
    ks = [csort_key(x) for x in xs]
    assert len(set(ks)) == len(ks)
    assert sorted(ks) == sorted(ks, key=lambda k: k)  # keys are orderable


def test_radical_coeff_repr_roundtrip_identity():
    r = croot(c(6), 2)
    assert isinstance(r, RadicalCoeff)
    assert ceq(r, croot(c(6), 2))
