"""The rigidity index of a problem from its formal local data.

rig = 2 r^2 - sum over singular points of
        [ Irr(End T_x) + r^2 - h0(End T_x) ],

the Euler-Poincare expansion of 2 - h^1 of the middle-extension End
complex, valid for formal data of an irreducible connection.  Rank-one
data always give 2; rig = 2 characterizes the rigid irreducible case.
"""

from __future__ import annotations

from .formal import FormalType, Problem, hom_h0, hom_irregularity


def local_defect(t: FormalType, r: int) -> int:
    """Contribution Irr(End) + r^2 - h0(End) of one point."""
    return hom_irregularity(t, t) + r * r - hom_h0(t, t)


def rig_index(p: Problem) -> int:
    r = p.rank()
    total = 2 * r * r
    for _, t in p.points:
        total -= local_defect(t, r)
    return total
