"""Formal types, local invariants, and the rigidity index."""

from fractions import Fraction

import pytest

from rigidconn.formal import (
    INF,
    FormalError,
    FormalType,
    Location,
    Problem,
    RegularPart,
    hom_h0,
    hom_irregularity,
    irregularity,
    is_quasi_unipotent,
    monodromy_exponents,
    rank,
    types_equal,
)
from rigidconn.puiseux import PolarPart, galois_act
from rigidconn.rigidity import rig_index

from helpers import F, el, fourpoint, hypergeometric, kloosterman, reg


def test_regular_part_exponents_mod_one():
    assert RegularPart.make([(F(4, 3), 1)]) == RegularPart.make([(F(1, 3), 1)])
    assert RegularPart.make([(F(-1, 4), 1)]) == RegularPart.make([(F(3, 4), 1)])


def test_rank_and_irregularity():
    t = kloosterman().at(INF)
    assert rank(t) == 2
    assert irregularity(t) == 1  # slope 1/2 times rank 2
    t2 = el(1, {2: 1}, (0, 1))
    assert irregularity(t2) == 2


def test_monodromy_exponents():
    t = reg((F(1, 3), 1), (0, 2))
    assert sorted(monodromy_exponents(t)) == [0, 0, F(1, 3)]


def test_types_equal_up_to_galois():
    phi = PolarPart.make(2, [(1, 1)])
    a = FormalType.make([(phi, RegularPart.single(0))])
    b = FormalType.make([(galois_act(phi, 1), RegularPart.single(0))])
    assert types_equal(a, b)
    c = FormalType.make([(phi, RegularPart.single(F(1, 2)))])
    assert not types_equal(a, c)


def test_hom_invariants_kloosterman():
    t = kloosterman().at(INF)
    assert hom_irregularity(t, t) == 1
    assert hom_h0(t, t) == 1


def test_hom_h0_regular():
    t = reg((F(1, 3), 1), (0, 1))
    assert hom_h0(t, t) == 2  # two distinct eigenvalues
    u = reg((0, 2))
    assert hom_h0(u, u) == 2  # centralizer of a single J2 block


def test_rank_mismatch_rejected():
    with pytest.raises(FormalError):
        Problem.make(1, [(Location.of(0), reg((0, 1))), (INF, reg((0, 2)))])


def test_duplicate_point_rejected():
    with pytest.raises(FormalError):
        Problem.make(1, [(Location.of(0), reg((0, 1))), (Location.of(0), reg((0, 1)))])


def test_rig_index_values():
    assert rig_index(hypergeometric()) == 2
    assert rig_index(kloosterman()) == 2
    assert rig_index(fourpoint()) == 0


def test_is_quasi_unipotent():
    assert is_quasi_unipotent(hypergeometric())
    P = Problem.make(
        1,
        [
            (Location.of(0), el(1, {1: 1}, (0, 1))),
            (INF, reg((0, 1))),
        ],
    )
    assert is_quasi_unipotent(P)
