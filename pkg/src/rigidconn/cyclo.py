"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored as coefficient vectors over Q in the power basis
1, z, ..., z^(phi(N)-1) of Q[x]/(Phi_N(x)), with z standing for the
primitive N-th root of unity exp(2*pi*i/N).  Working modulo the
cyclotomic polynomial (rather than x^N - 1) keeps zero-testing exact.
Cross-level operations promote both operands to the lcm level through
the embedding zeta_N = zeta_M^(M/N).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

Rational = Fraction

DEFAULT_PRECISION_BITS = 128
PRECISION_CAP_BITS = 2048


class CycloError(Exception):
    pass


class DivisionByZero(CycloError):
    pass


class NotCoprime(CycloError):
    pass


class ZeroArgument(CycloError):
    pass


class UndecidedSign(CycloError):
    """Raised when doubling the working precision up to the cap still
    does not separate a quantity from zero."""


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n == 1:
        return (-1, 1)
    # divide x^n - 1 by the product of Phi_d over proper divisors d
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            den = list(cyclotomic_coeffs(d))
            num = _polydiv_exact(num, den)
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, den monic up to sign
    num = list(num)
    dd = len(den) - 1
    lead = den[dd]
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % lead == 0
        f = c // lead
        q[i - dd] = f
        for j, dc in enumerate(den):
            num[i - dd + j] -= f * dc
    assert all(c == 0 for c in num)
    return q


def _reduce_mod_phi(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n (arbitrary degree) mod Phi_n."""
    phi = cyclotomic_coeffs(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        f = c[i]
        if f == 0:
            continue
        for j in range(deg + 1):
            c[i - deg + j] -= f * phi[j]
    c = c[:deg]
    c += [Fraction(0)] * (deg - len(c))
    return tuple(c)


@dataclass(frozen=True)
class CycloNum:
    """An element of Q(zeta_level); coeffs has length totient(level)."""

    level: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        assert len(self.coeffs) == totient(self.level)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rational(q) -> "CycloNum":
        q = Fraction(q)
        return CycloNum(1, (q,))

    @staticmethod
    def zeta(n: int, k: int = 1) -> "CycloNum":
        k %= n
        raw = [Fraction(0)] * (k + 1)
        raw[k] = Fraction(1)
        return CycloNum(n, _reduce_mod_phi(raw, n))

    @staticmethod
    def zero() -> "CycloNum":
        return CycloNum.from_rational(0)

    @staticmethod
    def one() -> "CycloNum":
        return CycloNum.from_rational(1)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational")
        return self.coeffs[0]

    def promote(self, m: int) -> "CycloNum":
        """Re-express at level m (level must divide m)."""
        if m == self.level:
            return self
        assert m % self.level == 0
        step = m // self.level
        raw = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            raw[i * step] += c
        return CycloNum(m, _reduce_mod_phi(raw, m))

    @staticmethod
    def _common(a: "CycloNum", b: "CycloNum"):
        m = math.lcm(a.level, b.level)
        return a.promote(m), b.promote(m)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "CycloNum":
        other = _coerce(other)
        a, b = CycloNum._common(self, other)
        return CycloNum(a.level, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.level, tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "CycloNum":
        return self + (-_coerce(other))

    def __mul__(self, other) -> "CycloNum":
        other = _coerce(other)
        a, b = CycloNum._common(self, other)
        raw = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x == 0:
                continue
            for j, y in enumerate(b.coeffs):
                if y == 0:
                    continue
                raw[i + j] += x * y
        return CycloNum(a.level, _reduce_mod_phi(raw, a.level))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return _coerce(other) - self

    def inv(self) -> "CycloNum":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return CycloNum.from_rational(1 / self.coeffs[0])
        phi = [Fraction(c) for c in cyclotomic_coeffs(self.level)]
        g, s = _poly_gcdext(list(self.coeffs), phi)
        assert len(g) == 1 and g[0] != 0, "Phi_N is irreducible over Q"
        inv_coeffs = [c / g[0] for c in s]
        return CycloNum(self.level, _reduce_mod_phi(inv_coeffs, self.level))

    def __truediv__(self, other) -> "CycloNum":
        return self * _coerce(other).inv()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inv()

    def __pow__(self, k: int) -> "CycloNum":
        if k < 0:
            return self.inv() ** (-k)
        result = CycloNum.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNum.from_rational(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        a, b = CycloNum._common(self, other)
        return a.coeffs == b.coeffs

    __hash__ = None  # mixed-level equality makes hashing unreliable

    def sort_key(self, level: int | None = None):
        """Deterministic key; comparable across values promoted to a
        common level."""
        a = self.promote(level) if level else self
        return tuple(a.coeffs)

    def __repr__(self):
        return f"CycloNum({self.level}, {format_cyclo(self)!r})"


def _coerce(x) -> CycloNum:
    if isinstance(x, CycloNum):
        return x
    if isinstance(x, (int, Fraction)):
        return CycloNum.from_rational(x)
    raise TypeError(f"cannot coerce {x!r} to CycloNum")


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    db = len(b) - 1
    while len(a) - 1 >= db and _poly_trim(a):
        da = len(a) - 1
        if da < db:
            break
        f = a[da] / b[db]
        q[da - db] = f
        for j in range(db + 1):
            a[da - db + j] -= f * b[j]
        a.pop()
    return q, _poly_trim(a)


def _poly_gcdext(a, b):
    """Return (g, s) with s*a = g mod b, g the gcd of a and b."""
    a = _poly_trim([Fraction(c) for c in a])
    b = _poly_trim([Fraction(c) for c in b])
    r0, r1 = a, b
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    return r0, s0


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _poly_trim(out)


# -- operations ------------------------------------------------------


def arith(op: str, a: CycloNum, b: CycloNum) -> CycloNum:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def inv(a: CycloNum) -> CycloNum:
    return a.inv()


def galois_apply(k: int, a: CycloNum) -> CycloNum:
    """The automorphism zeta_N -> zeta_N^k, k coprime to the level."""
    n = a.level
    if math.gcd(k, n) != 1:
        raise NotCoprime(f"gcd({k}, {n}) != 1")
    raw = [Fraction(0)] * ((len(a.coeffs) - 1) * (k % n) + 1 or 1)
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        e = (i * k) % n
        while e >= len(raw):
            raw.append(Fraction(0))
        raw[e] += c
    return CycloNum(n, _reduce_mod_phi(raw, n))


@dataclass(frozen=True)
class Ball:
    """Complex ball certified to contain a value."""

    center: complex
    radius: float

    def contains(self, z: complex) -> bool:
        return abs(complex(self.center) - z) <= self.radius

    def __add__(self, other: "Ball") -> "Ball":
        return Ball(self.center + other.center, self.radius + other.radius)

    def __mul__(self, other: "Ball") -> "Ball":
        c = self.center * other.center
        r = (
            abs(self.center) * other.radius
            + abs(other.center) * self.radius
            + self.radius * other.radius
        )
        return Ball(c, r)

    def contains_ball(self, other: "Ball") -> bool:
        return abs(complex(self.center) - complex(other.center)) + other.radius <= self.radius * (1 + 1e-15) + 1e-300


def embed_ball(a: CycloNum, precision_bits: int = DEFAULT_PRECISION_BITS) -> Ball:
    """Complex ball containing the image of a under zeta_N -> exp(2*pi*i/N)."""
    assert precision_bits >= 16
    size = sum(abs(c) for c in a.coeffs) + 1
    guard = 24 + max(0, size.numerator.bit_length() - size.denominator.bit_length())
    work = precision_bits + guard
    with mpmath.workprec(work):
        z = mpmath.mpc(0)
        for i, c in enumerate(a.coeffs):
            if c == 0:
                continue
            term = mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            if i:
                ang = 2 * mpmath.pi * i / a.level
                z += term * mpmath.mpc(mpmath.cos(ang), mpmath.sin(ang))
            else:
                z += term
        center = complex(z)
    # each arithmetic step is correct to ~2^-work relative precision;
    # bound the accumulated error generously by the coefficient mass
    nterms = sum(1 for c in a.coeffs if c != 0) + 1
    err = float(size) * nterms * 8.0 * 2.0 ** (-work)
    return Ball(center, err + 2.0 ** (-precision_bits - 4))


def _positive_rational_angle(a: CycloNum):
    """If a = rho * zeta_level^k with rho rational != 0, return the
    exact angle in turns, else None."""
    n = a.level
    for k in range(n):
        b = a * CycloNum.zeta(n, (-k) % n)
        if b.is_rational():
            q = b.as_rational()
            if q > 0:
                return Fraction(k, n) % 1
            if q < 0:
                return (Fraction(k, n) + Fraction(1, 2)) % 1
    return None


def angle_exact(a: CycloNum, precision_bits: int = DEFAULT_PRECISION_BITS):
    """Exact angle of a in turns when a is a rational multiple of a root
    of unity (detected through small powers); otherwise a certified real
    ball for arg(a)/2pi in (-1/2, 1/2]."""
    if a.is_zero():
        raise ZeroArgument("angle of zero")
    for m in range(1, 9):
        c = a**m
        ang = _positive_rational_angle(c)
        if ang is None:
            continue
        if m == 1:
            return ang
        # the angle of a is (ang + j)/m for some j; pick j numerically
        candidates = [Fraction(ang + j, m) % 1 for j in range(m)]
        approx = _angle_ball(a, precision_bits)
        gap = Fraction(1, 2 * m * ang.denominator * m)
        for cand in candidates:
            delta = abs(_circle_dist(float(cand), approx[0]))
            if delta <= approx[1] + 1e-18:
                if approx[1] < float(gap):
                    return cand
        # precision did not separate candidates; refine
        refined = _angle_ball(a, min(4 * precision_bits, PRECISION_CAP_BITS))
        for cand in candidates:
            if abs(_circle_dist(float(cand), refined[0])) <= refined[1]:
                return cand
        raise UndecidedSign("could not certify exact angle branch")
    center, rad = _angle_ball(a, precision_bits)
    return Ball(center, rad)


def _circle_dist(x: float, y: float) -> float:
    d = (x - y) % 1.0
    return min(d, 1.0 - d)


def _angle_ball(a: CycloNum, precision_bits: int):
    b = embed_ball(a, precision_bits)
    r = abs(b.center)
    if r <= b.radius:
        raise UndecidedSign("argument of a ball containing zero")
    theta = math.atan2(b.center.imag, b.center.real) / (2 * math.pi)
    # radius of the angular sector containing the ball, in turns
    ang_err = math.asin(min(1.0, b.radius / r)) / (2 * math.pi) + 1e-15
    return theta, ang_err


def certified_re_sign(a: CycloNum) -> int:
    """Sign of Re(embedding of a): -1, 0, +1; exact zero only when the
    element itself certifies it."""
    if a.is_zero():
        return 0
    # Re(a) = (a + conj(a))/2 is the Galois image under k = -1
    re2 = a + galois_apply(-1 % a.level if a.level > 1 else 1, a)
    if re2.is_zero():
        return 0
    bits = DEFAULT_PRECISION_BITS
    while bits <= PRECISION_CAP_BITS:
        b = embed_ball(re2, bits)
        if abs(b.center.real) > b.radius:
            return 1 if b.center.real > 0 else -1
        bits *= 2
    raise UndecidedSign("real-part sign undecided at precision cap")


def minimize_level(a: CycloNum) -> CycloNum:
    """Re-express a at the smallest cyclotomic level containing it.

    Gives a representation-independent storage form, which canonical
    orderings rely on."""
    n = a.level
    if n == 1:
        return a
    if a.is_rational():
        return CycloNum.from_rational(a.coeffs[0])
    best = a
    changed = True
    while changed:
        changed = False
        n = best.level
        for p in sorted({q for q in range(2, n + 1) if n % q == 0 and _is_prime(q)}):
            d = n // p
            # equal totients occur for n = 2 mod 4, d = n/2: same field,
            # strictly smaller level, so still worth descending
            if d < 1 or totient(d) > totient(n):
                continue
            # fixed by Gal(Q(zeta_n)/Q(zeta_d)) iff it lies in Q(zeta_d)
            fixed = all(
                galois_apply(k, best) == best
                for k in range(1, n)
                if k % d == 1 and math.gcd(k, n) == 1
            )
            if not fixed:
                continue
            down = _express_in_sublevel(best, d)
            if down is not None:
                best = down
                changed = True
                break
    return best


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for f in range(2, int(q**0.5) + 1):
        if q % f == 0:
            return False
    return True


def _express_in_sublevel(a: CycloNum, d: int):
    """Solve for coordinates of a in the power basis of Q(zeta_d) inside
    Q(zeta_level); None when a is not in the subfield."""
    n = a.level
    phi_d = totient(d)
    basis = [CycloNum.zeta(d, i).promote(n).coeffs for i in range(phi_d)]
    target = list(a.coeffs)
    # solve basis^T x = target by Gaussian elimination
    rows = [list(col) for col in zip(*basis)]  # totient(n) x phi_d
    aug = [row + [t] for row, t in zip(rows, target)]
    ncols = phi_d
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][-1]
    for i in range(r, len(aug)):
        if aug[i][-1] != 0:
            return None
    cand = CycloNum(d, tuple(sol))
    if cand.promote(n) == a:
        return cand
    return None


def format_cyclo(a: CycloNum) -> str:
    """Render in the problem-file coefficient syntax."""
    if a.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(a.coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(_fmt_q(c))
        elif c == 1:
            parts.append(f"z({a.level})^{i}" if i != 1 else f"z({a.level})")
        else:
            mono = f"z({a.level})^{i}" if i != 1 else f"z({a.level})"
            parts.append(f"{_fmt_q(c)}*{mono}")
    return " + ".join(parts)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
