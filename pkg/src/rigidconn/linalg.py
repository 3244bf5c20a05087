"""Dense exact linear algebra over cyclotomic fields.

Desk-scale Gaussian elimination: kernels, inverses, quotient actions and
Jordan data against a candidate eigenvalue list.  Matrices are lists of
rows of CycloNum.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloNum

Matrix = list[list[CycloNum]]


class LinAlgError(Exception):
    pass


def _c(x) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    return CycloNum.from_rational(Fraction(x))


def mat(rows) -> Matrix:
    return [[_c(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[CycloNum.one() if i == j else CycloNum.zero() for j in range(n)] for i in range(n)]


def zeros(n: int, m: int) -> Matrix:
    return [[CycloNum.zero() for _ in range(m)] for _ in range(n)]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    c = _c(c)
    return [[x * c for x in row] for row in a]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        for l in range(k):
            x = a[i][l]
            if x.is_zero():
                continue
            for j in range(m):
                if not b[l][j].is_zero():
                    out[i][j] = out[i][j] + x * b[l][j]
    return out


def mat_vec(a: Matrix, v: list[CycloNum]) -> list[CycloNum]:
    return [sum((x * y for x, y in zip(row, v)), CycloNum.zero()) for row in a]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [row[:] for row in a]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if not m[i][c].is_zero()), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c].inv()
        m[r] = [x * pv for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c].is_zero():
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def mat_rank(a: Matrix) -> int:
    return len(rref(a)[1])


def kernel_basis(a: Matrix) -> list[list[CycloNum]]:
    """Basis of the right kernel."""
    if not a:
        return []
    red, pivots = rref(a)
    cols = len(a[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [CycloNum.zero()] * cols
        v[fc] = CycloNum.one()
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    aug = [row[:] + identity(n)[i] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise LinAlgError("matrix not invertible")
    return [row[n:] for row in red]


def mat_pow_ker_dims(a: Matrix, lam: CycloNum, max_k: int) -> list[int]:
    """dim ker (a - lam I)^k for k = 1..max_k."""
    n = len(a)
    b = mat_sub(a, mat_scale(identity(n), lam))
    dims = []
    p = identity(n)
    for _ in range(max_k):
        p = mat_mul(p, b)
        dims.append(n - mat_rank(p))
    return dims


def jordan_blocks(a: Matrix, candidates: list[CycloNum]) -> list[tuple[CycloNum, list[int]]]:
    """Jordan structure of a, all of whose eigenvalues must lie in the
    candidate list; [(eigenvalue, block sizes)]."""
    n = len(a)
    out = []
    total = 0
    for lam in candidates:
        dims = mat_pow_ker_dims(a, lam, n)
        if dims[0] == 0:
            continue
        sizes = []
        prev = 0
        geq = []  # number of blocks of size >= k
        for k in range(n):
            geq.append(dims[k] - prev)
            prev = dims[k]
        for k in range(n, 0, -1):
            cnt = geq[k - 1] - (geq[k] if k < n else 0)
            sizes.extend([k] * cnt)
        out.append((lam, sorted(sizes, reverse=True)))
        total += sum(sizes)
    if total != n:
        raise LinAlgError("eigenvalues outside the candidate set")
    return out


def column_span_basis(vectors: list[list[CycloNum]]) -> list[list[CycloNum]]:
    """Independent subset spanning the same space."""
    basis: list[list[CycloNum]] = []
    for v in vectors:
        test = basis + [v]
        m = [list(col) for col in zip(*test)] if test else []
        if mat_rank(m) == len(test):
            basis.append(v)
    return basis


def quotient_action(maps: list[Matrix], subspace: list[list[CycloNum]]) -> tuple[int, list[Matrix]]:
    """Induced action of invariant maps on V / span(subspace)."""
    n = len(maps[0]) if maps else 0
    sub = column_span_basis(subspace)
    d = len(sub)
    # choose complement: standard vectors at non-pivot coordinates of sub
    if d:
        _, pivots = rref(sub)
    else:
        pivots = []
    comp = [j for j in range(n) if j not in pivots]
    full = sub + [[CycloNum.one() if i == j else CycloNum.zero() for i in range(n)] for j in comp]
    basis_mat = [list(col) for col in zip(*full)]  # columns are basis vectors
    binv = mat_inv(basis_mat)
    out = []
    for mp in maps:
        q = zeros(len(comp), len(comp))
        for jc, j in enumerate(comp):
            img = [mp[i][j] for i in range(n)]
            coords = mat_vec(binv, img)
            for ic in range(len(comp)):
                q[ic][jc] = coords[d + ic]
        out.append(q)
    return len(comp), out
