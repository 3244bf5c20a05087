"""Exact dense linear algebra over cyclotomic numbers."""

import pytest

from rigidconn.cyclo import CycloNum
from rigidconn.linalg import (
    LinAlgError,
    identity,
    jordan_blocks,
    kernel_basis,
    mat,
    mat_inv,
    mat_mul,
    mat_rank,
    quotient_action,
    rref,
)

ONE = CycloNum.one()


def test_rref_pivots():
    m, pivots = rref(mat([[1, 2, 3], [2, 4, 6], [0, 0, 1]]))
    assert pivots == [0, 2]
    assert mat_rank(mat([[1, 2], [3, 4]])) == 2
    assert mat_rank(mat([[1, 2], [2, 4]])) == 1


def test_kernel_basis():
    ker = kernel_basis(mat([[1, 2, 3]]))
    assert len(ker) == 2
    for v in ker:
        s = sum((c * x for c, x in zip(mat([[1, 2, 3]])[0], v)), CycloNum.zero())
        assert s.is_zero()


def test_mat_inv_roundtrip():
    z = CycloNum.zeta(5)
    a = [[ONE, z], [z * z, ONE]]
    assert mat_mul(a, mat_inv(a)) == identity(2)
    with pytest.raises(LinAlgError):
        mat_inv(mat([[1, 2], [2, 4]]))


def test_jordan_blocks():
    a = mat([[1, 1], [0, 1]])
    assert jordan_blocks(a, [ONE]) == [(ONE, [2])]
    b = mat([[0, 1], [1, 0]])
    out = jordan_blocks(b, [ONE, -ONE])
    assert [(repr(lam), sizes) for lam, sizes in out] == [
        (repr(ONE), [1]),
        (repr(-ONE), [1]),
    ]
    with pytest.raises(LinAlgError):
        jordan_blocks(b, [ONE])  # -1 missing from the candidate list


def test_quotient_action():
    # invariant subspace span(e1+e2, e3) in dimension 3, map swaps
    # e1,e2 and doubles e3; the quotient class of e2 maps to -[e2]
    maps = [mat([[0, 1, 0], [1, 0, 0], [0, 0, 2]])]
    sub = [[ONE, ONE, CycloNum.zero()], [CycloNum.zero(), CycloNum.zero(), ONE]]
    dim, q = quotient_action(maps, sub)
    assert dim == 1
    assert q[0] == [[-ONE]]


def test_quotient_action_shifted_pivots():
    # subspace whose pivot coordinates are not an initial segment: the
    # complement must be chosen by coordinate position, not vector index
    maps = [mat([[1, 0, 0], [0, 2, 0], [0, 0, 3]])]
    sub = [[CycloNum.zero(), ONE, CycloNum.zero()], [CycloNum.zero(), CycloNum.zero(), ONE]]
    dim, q = quotient_action(maps, sub)
    assert dim == 1
    assert q[0] == [[ONE]]
