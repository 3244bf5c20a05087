"""Shared constructors and comparison helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction

from rigidconn.cyclo import CycloNum
from rigidconn.formal import (
    INF,
    FormalType,
    Location,
    Problem,
    RegularPart,
    types_equal,
)
from rigidconn.puiseux import PolarPart

F = Fraction


def reg(*blocks) -> FormalType:
    """Purely regular formal type with the given (exponent, size) blocks."""
    return FormalType.regular(RegularPart.make(list(blocks)))


def el(p, terms, *blocks) -> FormalType:
    """Single elementary factor El(phi) tensor Reg(blocks) at ramification p."""
    return FormalType.make([(PolarPart.make(p, terms), RegularPart.make(list(blocks)))])


def problems_equal(P: Problem, Q: Problem) -> bool:
    """Same formal data at the same locations; the declared common
    denominator N is bookkeeping and is ignored."""
    da = dict(P.points)
    db = dict(Q.points)
    if set(da) != set(db):
        return False
    return all(types_equal(da[l], db[l]) for l in da)


def problems_equal_nontrivial(P: Problem, Q: Problem) -> bool:
    """problems_equal after dropping points carrying the trivial formal
    type (rank-matching identity monodromy), which a transform may either
    drop or retain."""
    da = {l: t for l, t in P.points if not t.is_trivial()}
    db = {l: t for l, t in Q.points if not t.is_trivial()}
    if set(da) != set(db):
        return False
    return all(types_equal(da[l], db[l]) for l in da)


def hypergeometric() -> Problem:
    """Non-resonant rank-2 regular problem at {0, 1, inf}."""
    return Problem.make(
        12,
        [
            (Location.of(0), reg((F(1, 3), 1), (0, 1))),
            (Location.of(1), reg((F(1, 4), 1), (0, 1))),
            (INF, reg((F(1, 6), 1), (F(1, 4), 1))),
        ],
    )


def kloosterman() -> Problem:
    """Rank-2 problem: unipotent J2 at 0, El(t^{-1/2}) at infinity."""
    return Problem.make(
        1,
        [
            (Location.of(0), reg((0, 2))),
            (INF, el(2, {1: 1}, (0, 1))),
        ],
    )


def fourpoint() -> Problem:
    """Rank-2 regular problem with four half-integer points: rig = 0."""
    half = reg((F(1, 2), 1), (0, 1))
    return Problem.make(
        2,
        [
            (Location.of(0), half),
            (Location.of(1), half),
            (Location.of(-1), half),
            (INF, half),
        ],
    )


def fourier_battery() -> list[Problem]:
    """50 admissible problems, mixed tame/irregular, rank <= 3, integral
    global exponent sum (realizable determinant)."""
    battery: list[Problem] = []
    # rank 1, tame, three points
    for a, b in [(F(1, 3), F(1, 4)), (F(1, 2), F(1, 3)), (F(2, 3), F(1, 6)), (F(1, 5), F(2, 5))]:
        battery.append(
            Problem.make(
                60,
                [
                    (Location.of(0), reg((a, 1))),
                    (Location.of(1), reg((b, 1))),
                    (INF, reg(((-a - b) % 1, 1))),
                ],
            )
        )
    # rank 1, irregular at a finite point
    for c in (1, 2, -1):
        for a in (F(0), F(1, 2), F(1, 3)):
            battery.append(
                Problem.make(
                    6,
                    [
                        (
                            Location.of(0),
                            FormalType.make(
                                [(PolarPart.unramified({1: c}), RegularPart.single(a))]
                            ),
                        ),
                        (INF, reg(((-a) % 1, 1))),
                    ],
                )
            )
    # rank 1, slope 2 at infinity
    for c in (1, -1, 2):
        battery.append(
            Problem.make(
                2,
                [
                    (Location.of(0), reg((F(1, 2), 1))),
                    (INF, el(1, {2: c}, (F(1, 2), 1))),
                ],
            )
        )
    # rank 2, tame three-point
    for a1, a2, b1, b2, c1, c2 in [
        (F(1, 3), 0, F(1, 4), 0, F(1, 6), F(1, 4)),
        (F(1, 2), 0, F(1, 3), 0, F(1, 12), F(1, 12)),
        (F(1, 6), F(5, 6), F(1, 2), 0, F(1, 3), F(1, 6)),
    ]:
        battery.append(
            Problem.make(
                12,
                [
                    (Location.of(0), reg((a1, 1), (a2, 1))),
                    (Location.of(1), reg((b1, 1), (b2, 1))),
                    (INF, reg((c1, 1), (c2, 1))),
                ],
            )
        )
    # rank 2 with Jordan blocks
    battery.append(
        Problem.make(
            2,
            [
                (Location.of(0), reg((0, 2))),
                (Location.of(1), reg((F(1, 2), 2))),
                (INF, reg((F(1, 2), 2))),
            ],
        )
    )
    battery.append(kloosterman())
    # rank 2, irregular factor plus regular factor at a finite point
    for c in (1, 2):
        for a in (F(1, 4), F(1, 2)):
            battery.append(
                Problem.make(
                    4,
                    [
                        (
                            Location.of(0),
                            FormalType.make(
                                [
                                    (PolarPart.unramified({1: c}), RegularPart.single(F(1, 4))),
                                    (PolarPart.zero(), RegularPart.single(a)),
                                ]
                            ),
                        ),
                        (INF, reg(((F(3, 4) - a) % 1, 1), ((-a) % 1 if a else F(1, 4), 1))),
                    ],
                )
            )
    # rank 2, ramified at infinity, slope 3/2
    for c in (1, -1):
        battery.append(
            Problem.make(
                2,
                [
                    (Location.of(0), reg((F(1, 2), 1), (0, 1))),
                    (INF, el(2, {3: c}, (0, 1))),
                ],
            )
        )
    # rank 2, two slope-2 factors at infinity
    battery.append(
        Problem.make(
            2,
            [
                (Location.of(0), reg((F(1, 2), 2))),
                (
                    INF,
                    FormalType.make(
                        [
                            (PolarPart.unramified({2: 1}), RegularPart.single(0)),
                            (PolarPart.unramified({2: -1}), RegularPart.single(F(1, 2))),
                        ]
                    ),
                ),
            ],
        )
    )
    # rank 3, tame
    for a, b, c in [(F(1, 3), F(1, 4), F(1, 5)), (F(1, 2), F(1, 3), F(1, 7))]:
        battery.append(
            Problem.make(
                420,
                [
                    (Location.of(0), reg((a, 1), (0, 2))),
                    (Location.of(1), reg((b, 1), (0, 1), (F(1, 2), 1))),
                    (INF, reg((c, 1), (F(2, 3), 1), (F(3, 4), 1))),
                ],
            )
        )
    # rank 3, ramification 3 at infinity (slope 4/3)
    battery.append(
        Problem.make(
            3,
            [
                (Location.of(0), reg((F(1, 3), 1), (F(2, 3), 1), (0, 1))),
                (INF, el(3, {4: 1}, (0, 1))),
            ],
        )
    )
    # rank 3, irregular finite point plus a tame point
    battery.append(
        Problem.make(
            6,
            [
                (
                    Location.of(0),
                    FormalType.make(
                        [
                            (PolarPart.unramified({1: 3}), RegularPart.single(F(1, 6))),
                            (PolarPart.zero(), RegularPart.make([(F(1, 2), 2)])),
                        ]
                    ),
                ),
                (Location.of(1), reg((F(1, 3), 1), (0, 2))),
                (INF, reg((F(1, 6), 1), (F(5, 6), 1), (0, 1))),
            ],
        )
    )
    # rank 1, two irregular finite points
    for c1, c2 in [(1, 2), (1, -1), (2, 3)]:
        battery.append(
            Problem.make(
                2,
                [
                    (
                        Location.of(0),
                        FormalType.make(
                            [(PolarPart.unramified({1: c1}), RegularPart.single(F(1, 2)))]
                        ),
                    ),
                    (
                        Location.of(1),
                        FormalType.make(
                            [(PolarPart.unramified({1: c2}), RegularPart.single(0))]
                        ),
                    ),
                    (INF, reg((F(1, 2), 1))),
                ],
            )
        )
    # rank 2, ramified slope 1/2 at a finite point
    for c in (1, 2):
        battery.append(
            Problem.make(
                2,
                [
                    (Location.of(0), el(2, {1: c}, (0, 1))),
                    (Location.of(1), reg((F(1, 2), 2))),
                    (INF, reg((F(1, 2), 1), (0, 1))),
                ],
            )
        )
    # pad to 50 with rank-1 tame seeds over sevenths
    pairs = [(F(k, 7), F(m, 7)) for k in range(1, 5) for m in range(1, 5)][:13]
    for a, b in pairs:
        battery.append(
            Problem.make(
                7,
                [
                    (Location.of(0), reg((a, 1))),
                    (Location.of(2), reg((b, 1))),
                    (INF, reg(((-a - b) % 1, 1))),
                ],
            )
        )
    assert len(battery) == 50
    return battery


def zeta6(k: int) -> CycloNum:
    return CycloNum.zeta(6) ** k
