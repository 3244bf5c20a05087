"""Reduction loop, certificates, and exact replay."""

from fractions import Fraction

import pytest

from rigidconn.cyclo import CycloNum
from rigidconn.formal import INF, FormalType, Location, Problem, RegularPart
from rigidconn.puiseux import PolarPart, slope
from rigidconn.adk import (
    Certificate,
    ReplayMismatch,
    Step,
    TwoSpecialPoints,
    normalize_problem,
    replay_certificate,
    run_adk,
)
from rigidconn.rigidity import rig_index

from helpers import F, el, fourpoint, hypergeometric, kloosterman, problems_equal, reg


def test_run_adk_hypergeometric():
    P = hypergeometric()
    cert = run_adk(P)
    assert isinstance(cert, Certificate)
    assert cert.terminal.rank() == 1
    assert problems_equal(replay_certificate(cert), P)


def test_run_adk_kloosterman():
    P = kloosterman()
    cert = run_adk(P)
    assert isinstance(cert, Certificate)
    assert problems_equal(replay_certificate(cert), P)


def test_run_adk_not_rigid():
    res = run_adk(fourpoint())
    assert not isinstance(res, Certificate)


def test_normalize_moves_special_point_to_infinity():
    # ramified point at 5: a Moebius map must bring it to infinity and
    # transport the polar part with the slope preserved
    P = Problem.make(
        1,
        [
            (Location.of(0), reg((0, 2))),
            (Location.of(5), el(2, {1: 1}, (0, 1))),
        ],
    )
    N, steps = normalize_problem(P)
    assert any(s.kind == "moebius" for s in steps)
    d = dict(N.points)
    assert INF in d
    polar_slopes = [slope(f.phi) for f in d[INF].factors if not f.phi.is_zero()]
    assert polar_slopes == [F(1, 2)]


def test_normalize_two_special_points_rejected():
    P = Problem.make(
        2,
        [
            (Location.of(3), el(2, {1: 1}, (0, 1))),
            (Location.of(5), el(2, {1: CycloNum.from_rational(2)}, (0, 1))),
        ],
    )
    with pytest.raises(TwoSpecialPoints):
        normalize_problem(P)


def test_reduction_of_translated_kloosterman():
    # same data as Kloosterman but with the wild point at 5 instead of
    # infinity: run, certify, replay back to the original
    P = Problem.make(
        1,
        [
            (Location.of(0), reg((0, 2))),
            (Location.of(5), el(2, {1: 1}, (0, 1))),
        ],
    )
    assert rig_index(P) == 2
    cert = run_adk(P)
    assert isinstance(cert, Certificate)
    assert problems_equal(replay_certificate(cert), P)


def test_corrupted_certificate_rejected():
    cert = run_adk(hypergeometric())
    assert isinstance(cert, Certificate)
    bad_steps = tuple(
        Step("mc", s.data + F(1, 5), s.predicted_rank) if s.kind == "mc" else s
        for s in cert.steps
    )
    assert bad_steps != cert.steps
    with pytest.raises(ReplayMismatch):
        replay_certificate(Certificate(bad_steps, cert.terminal, cert.origin))


def test_certificate_records_origin():
    P = hypergeometric()
    cert = run_adk(P)
    assert problems_equal(cert.origin, P)
