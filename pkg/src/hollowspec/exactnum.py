"""Exact integer polynomials, Sturm root counting and algebraic thresholds.

A threshold is a positive real algebraic number stored as a squarefree
primitive integer polynomial together with a rational interval that
contains exactly one of its real roots.  Every comparison in the package
reduces to sign evaluation at rationals and Sturm root counts, so no
floating point value ever enters a verdict.

Minimal polynomials are only required to be squarefree, not irreducible.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence, TypeVar

from .errors import EndpointRoot, InvalidThreshold, NonPositive, PerfectSquare, ZeroPolynomial

R = TypeVar("R")


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients, lowest degree first."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = [int(v) for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x(cls) -> IntPolynomial:
        return cls((0, 1))

    @classmethod
    def constant(cls, c: int) -> IntPolynomial:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPolynomial:
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial(tuple(a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))))

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-v for v in self.coeffs))

    def __sub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other: IntPolynomial | int) -> IntPolynomial:
        return _as_poly(other) - self

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x: int | Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: int | Fraction) -> int:
        """Exact sign of ``p(x)`` at a rational point, using integer arithmetic only."""
        x = Fraction(x)
        num, den = x.numerator, x.denominator
        if not self.coeffs:
            return 0
        h = self.coeffs[-1]
        bp = den
        for c in self.coeffs[-2::-1]:
            h = h * num + c * bp
            bp *= den
        return _sign(h)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def compose(self, inner: IntPolynomial) -> IntPolynomial:
        """Return ``self(inner(x))``."""
        out = IntPolynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, c: int) -> IntPolynomial:
        """Return ``p(x + c)``."""
        return self.compose(IntPolynomial((c, 1)))

    def reflect(self) -> IntPolynomial:
        """Return ``p(-x)``."""
        return IntPolynomial(tuple(-v if i & 1 else v for i, v in enumerate(self.coeffs)))

    def content(self) -> int:
        g = 0
        for v in self.coeffs:
            g = gcd(g, v)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide by the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content() * _sign(self.leading)
        return IntPolynomial(tuple(v // g for v in self.coeffs))

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(v: IntPolynomial | int) -> IntPolynomial:
    return v if isinstance(v, IntPolynomial) else IntPolynomial((int(v),))


def format_poly(p: IntPolynomial, var: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif i == 1:
            body = var if mag == 1 else f"{mag}*{var}"
        else:
            body = f"{var}^{i}" if mag == 1 else f"{mag}*{var}^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def positive_rem(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Remainder of ``c*p`` modulo ``q`` for some positive integer ``c``.

    Scaling by ``|lc(q)|`` keeps the remainder sign-compatible with the
    true rational remainder, which Sturm chains rely on.
    """
    if q.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    r = list(p.coeffs)
    dq = q.degree
    lq = q.leading
    s = _sign(lq)
    aq = abs(lq)
    while len(r) - 1 >= dq and r:
        k = len(r) - 1 - dq
        lr = r[-1]
        r = [aq * v for v in r]
        for i, b in enumerate(q.coeffs):
            r[i + k] -= s * lr * b
        while r and r[-1] == 0:
            r.pop()
    return IntPolynomial(tuple(r))


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd with positive leading coefficient (zero if both are zero)."""
    a, b = p.primitive(), q.primitive()
    while b:
        a, b = b, positive_rem(a, b).primitive()
    return a.primitive()


def exact_quotient(p: IntPolynomial, d: IntPolynomial) -> IntPolynomial:
    """Primitive part of ``p / d`` where ``d`` divides ``p`` over the rationals."""
    if d.is_zero():
        raise ZeroPolynomial("division by the zero polynomial")
    r = [Fraction(v) for v in p.coeffs]
    out = [Fraction(0)] * max(p.degree - d.degree + 1, 0)
    ld = d.leading
    for k in range(len(out) - 1, -1, -1):
        c = r[k + d.degree] / ld
        out[k] = c
        for i, b in enumerate(d.coeffs):
            r[i + k] -= c * b
    if any(r):
        raise ValueError(f"{d} does not divide {p}")
    den = 1
    for c in out:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial(tuple(int(c * den) for c in out)).primitive()


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial has no squarefree part")
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p.primitive()
    return exact_quotient(p, g)


@lru_cache(maxsize=65536)
def _sturm_chain(coeffs: tuple[int, ...]) -> tuple[IntPolynomial, ...]:
    p = squarefree_part(IntPolynomial(coeffs))
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        r = positive_rem(chain[-2], chain[-1])
        if not r:
            break
        c = r.content()
        chain.append(IntPolynomial(tuple(-v // c for v in r.coeffs)))
    return tuple(q for q in chain if q)


def sturm_chain(p: IntPolynomial) -> tuple[IntPolynomial, ...]:
    """Sturm chain of the squarefree part of ``p``."""
    if p.is_zero():
        raise ZeroPolynomial("Sturm chain of the zero polynomial")
    return _sturm_chain(p.coeffs)


def _variations(signs: Iterable[int]) -> int:
    count, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def _var_at(chain: Sequence[IntPolynomial], x: Fraction) -> int:
    return _variations(q.sign_at(x) for q in chain)


def _var_at_pos_inf(chain: Sequence[IntPolynomial]) -> int:
    return _variations(_sign(q.leading) for q in chain)


def _var_at_neg_inf(chain: Sequence[IntPolynomial]) -> int:
    return _variations(_sign(q.leading) * (-1) ** q.degree for q in chain)


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"


def sturm_count(p: IntPolynomial, iv: RationalInterval) -> int:
    """Number of distinct real roots of ``p`` strictly inside ``iv``."""
    if p.is_zero():
        raise ZeroPolynomial("sturm_count of the zero polynomial")
    for end in (iv.lo, iv.hi):
        if p.sign_at(end) == 0:
            raise EndpointRoot(f"{end} is a root of {p}")
    if iv.lo == iv.hi:
        return 0
    chain = sturm_chain(p)
    return _var_at(chain, iv.lo) - _var_at(chain, iv.hi)


def count_roots_above(p: IntPolynomial, x: Fraction) -> int:
    """Distinct real roots of ``p`` in ``(x, +inf)``; ``x`` itself may be a root."""
    chain = sturm_chain(p)
    return _var_at(chain, Fraction(x)) - _var_at_pos_inf(chain)


def count_real_roots(p: IntPolynomial) -> int:
    chain = sturm_chain(p)
    return _var_at_neg_inf(chain) - _var_at_pos_inf(chain)


def cauchy_bound(p: IntPolynomial) -> int:
    """Integer ``B`` with every complex root of ``p`` strictly inside ``|z| < B``."""
    if p.degree < 1:
        return 1
    lead = abs(p.leading)
    m = max(abs(c) for c in p.coeffs[:-1])
    return 1 + -(-m // lead)


def _split_point(lo: Fraction, hi: Fraction, avoid: Sequence[IntPolynomial]) -> Fraction:
    k = 2
    while True:
        for j in range(1, k):
            m = lo + (hi - lo) * j / k
            if all(q.sign_at(m) for q in avoid):
                return m
        k += 1


def isolate_real_roots(p: IntPolynomial) -> list[RationalInterval]:
    """Disjoint open intervals, in increasing order, each holding one real root.

    Endpoints are never roots of ``p``.
    """
    sq = squarefree_part(p)
    if sq.degree < 1:
        return []
    b = cauchy_bound(sq)
    out: list[RationalInterval] = []
    stack = [(Fraction(-b), Fraction(b))]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(sq, RationalInterval(lo, hi))
        if n == 0:
            continue
        if n == 1:
            out.append(RationalInterval(lo, hi))
            continue
        m = _split_point(lo, hi, (sq,))
        stack.append((lo, m))
        stack.append((m, hi))
    return sorted(out, key=lambda iv: iv.lo)


def _det(matrix: Sequence[Sequence[R]], zero: R, one: R) -> R:
    """Determinant over any commutative ring by memoised Laplace expansion."""
    n = len(matrix)
    memo: dict[tuple[int, int], R] = {}

    def minor(row: int, cols: int) -> R:
        if row == n:
            return one
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = zero
        for c in range(n):
            if cols >> c & 1:
                continue
            entry = matrix[row][c]
            if entry != zero:
                # sign from the position of c among the still-free columns
                left = bin(cols & ((1 << c) - 1)).count("1")
                term = entry * minor(row + 1, cols | 1 << c)
                total = total + term if (c - left) % 2 == 0 else total - term
        memo[key] = total
        return total

    return minor(0, 0)


def resultant(f: Sequence[IntPolynomial], g: Sequence[IntPolynomial]) -> IntPolynomial:
    """Resultant in ``y`` of two polynomials with coefficients in ``Z[x]``.

    ``f`` and ``g`` list their ``y``-coefficients lowest degree first; the
    result is the Sylvester determinant, a polynomial in ``x``.
    """
    f = [_as_poly(c) for c in f]
    g = [_as_poly(c) for c in g]
    while f and not f[-1]:
        f.pop()
    while g and not g[-1]:
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return IntPolynomial()
    size = m + n
    zero = IntPolynomial()
    rows: list[list[IntPolynomial]] = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    if size == 0:
        return IntPolynomial((1,))
    return _det(rows, zero, IntPolynomial((1,)))


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


@dataclass(frozen=True)
class SpectralThreshold:
    """A positive real algebraic number ``(minpoly, isolation)``.

    ``isolation`` is an open interval whose endpoints are not roots of
    ``minpoly`` and which contains exactly one root, the represented value.
    ``display`` is a decimal approximation for humans only.
    """

    minpoly: IntPolynomial
    isolation: RationalInterval
    display: str = ""

    @property
    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    @property
    def rational_value(self) -> Fraction | None:
        if self.minpoly.degree != 1:
            return None
        c0, c1 = self.minpoly.coeffs
        return Fraction(-c0, c1)

    def bisect(self, avoid: Sequence[IntPolynomial] = ()) -> SpectralThreshold:
        lo, hi = _bisect(self.minpoly, self.isolation.lo, self.isolation.hi, avoid)
        return SpectralThreshold(self.minpoly, RationalInterval(lo, hi), self.display)

    def refined(self, width: Fraction) -> SpectralThreshold:
        t = self
        while t.isolation.width >= width:
            t = t.bisect()
        return t

    def approx(self, digits: int = 6) -> Fraction:
        """Rational within ``10**-digits`` of the value."""
        q = self.rational_value
        if q is not None:
            return q
        return self.refined(Fraction(1, 10**digits)).isolation.midpoint

    def __float__(self) -> float:
        return float(self.approx(15))

    def is_root_of(self, q: IntPolynomial) -> bool:
        """Exactly decide whether the represented value is a root of ``q``."""
        if q.is_zero():
            return True
        val = self.rational_value
        if val is not None:
            return q.sign_at(val) == 0
        g = poly_gcd(self.minpoly, q)
        if g.degree < 1:
            return False
        # g divides the squarefree minpoly, so it changes sign across the value
        return g.sign_at(self.isolation.lo) * g.sign_at(self.isolation.hi) < 0

    def isolate_against(self, q: IntPolynomial) -> tuple[Fraction, Fraction]:
        """Interval for the value whose closure meets no root of ``q`` except possibly the value."""
        qs = squarefree_part(q)
        target = 1 if self.is_root_of(qs) else 0
        lo, hi = self.isolation.lo, self.isolation.hi
        while True:
            if qs.sign_at(lo) and qs.sign_at(hi) and sturm_count(qs, RationalInterval(lo, hi)) == target:
                return lo, hi
            lo, hi = _bisect(self.minpoly, lo, hi, (qs,))

    def sign_of(self, q: IntPolynomial) -> int:
        """Exact sign of ``q`` evaluated at the represented value."""
        val = self.rational_value
        if val is not None:
            return q.sign_at(val)
        if q.is_zero() or self.is_root_of(q):
            return 0
        lo, _ = self.isolate_against(q)
        return q.sign_at(lo)

    def count_roots_above(self, q: IntPolynomial) -> int:
        """Number of distinct real roots of ``q`` strictly greater than the value."""
        val = self.rational_value
        if val is not None:
            return count_roots_above(q, val)
        _, hi = self.isolate_against(q)
        return count_roots_above(q, hi)

    def __str__(self) -> str:
        return self.display or f"root of {self.minpoly} in {self.isolation}"


def _bisect(p: IntPolynomial, lo: Fraction, hi: Fraction, avoid: Sequence[IntPolynomial]) -> tuple[Fraction, Fraction]:
    m = _split_point(lo, hi, (p, *avoid))
    if p.sign_at(lo) * p.sign_at(m) < 0:
        return lo, m
    return m, hi


def _decimal_string(t: SpectralThreshold, digits: int = 6) -> str:
    q = t.rational_value
    if q is not None:
        den = q.denominator
        while den % 2 == 0:
            den //= 2
        while den % 5 == 0:
            den //= 5
        if den == 1:
            s = f"{_fixed(q, 30)}".rstrip("0").rstrip(".")
            return s
    return _fixed(t.approx(digits + 3), digits)


def _fixed(q: Fraction, digits: int) -> str:
    scaled = q * 10**digits
    n = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def threshold_from_isolation(p: IntPolynomial, lo: Fraction | int, hi: Fraction | int) -> SpectralThreshold:
    """Build a threshold from any polynomial and an interval isolating a positive root.

    The polynomial is reduced to its primitive squarefree part.  Endpoints
    that happen to be roots are rejected.
    """
    if p.is_zero():
        raise ZeroPolynomial("threshold polynomial is zero")
    sq = squarefree_part(p)
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise InvalidThreshold(f"isolating interval ({lo}, {hi}) is empty")
    iv = RationalInterval(lo, hi)
    if sturm_count(sq, iv) != 1:
        raise InvalidThreshold(f"({lo}, {hi}) does not isolate exactly one root of {sq}")
    if lo < 0:
        if hi <= 0 or sq.sign_at(0) == 0 or sturm_count(sq, RationalInterval(Fraction(0), hi)) != 1:
            raise NonPositive(f"the root of {sq} in ({lo}, {hi}) is not positive")
        iv = RationalInterval(Fraction(0), hi)
    t = SpectralThreshold(sq, iv)
    return SpectralThreshold(sq, iv, _decimal_string(t))


def threshold_from_rational(q: Fraction | int | str) -> SpectralThreshold:
    q = Fraction(q)
    if q <= 0:
        raise NonPositive(f"threshold must be positive, got {q}")
    p = IntPolynomial((-q.numerator, q.denominator))
    t = SpectralThreshold(p, RationalInterval(q / 2, 2 * q))
    return SpectralThreshold(p, t.isolation, _decimal_string(t))


def threshold_sqrt(n: int) -> SpectralThreshold:
    if n < 2:
        raise NonPositive(f"sqrt threshold needs n >= 2, got {n}")
    r = isqrt(n)
    if r * r == n:
        raise PerfectSquare(n, r)
    return threshold_from_isolation(IntPolynomial((-n, 0, 1)), r, r + 1)


def _unique_positive_root(p: IntPolynomial) -> SpectralThreshold:
    positives = [iv for iv in isolate_real_roots(p) if iv.hi > 0]
    if len(positives) != 1:
        raise InvalidThreshold(f"{p} has {len(positives)} positive roots")
    iv = positives[0]
    t = threshold_from_isolation(p, max(iv.lo, Fraction(0)), iv.hi)
    return t.refined(Fraction(1, 1024))


@lru_cache(maxsize=None)
def lambda_star() -> SpectralThreshold:
    """``rho**(1/2) + rho**(-1/2)`` for the real root ``rho`` of ``y**3 = y + 1``.

    ``t = rho + 1/rho`` is eliminated with the resultant of ``y**3 - y - 1``
    and ``y**2 - t*y + 1``; substituting ``t = x**2 - 2`` gives a polynomial
    whose only positive root is the threshold.
    """
    t = IntPolynomial.x()
    cubic = [-1, -1, 0, 1]
    quadratic = [1, -t, 1]
    in_t = resultant(cubic, quadratic)
    return _unique_positive_root(in_t.compose(IntPolynomial((-2, 0, 1))))


@lru_cache(maxsize=None)
def lambda_prime() -> SpectralThreshold:
    """``sqrt(2 + sqrt(5))``; only used for reporting."""
    x2m2 = IntPolynomial((-2, 0, 1))
    return _unique_positive_root(resultant([-5, 0, 1], [x2m2, -1]))


def compare_thresholds(s: SpectralThreshold, t: SpectralThreshold) -> Ordering:
    """Exact trichotomy between two thresholds."""
    qs, qt = s.rational_value, t.rational_value
    if qs is not None and qt is not None:
        return Ordering.LESS if qs < qt else Ordering.GREATER if qs > qt else Ordering.EQUAL
    a, b = s.isolation, t.isolation
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo < hi:
        g = poly_gcd(s.minpoly, t.minpoly)
        # endpoints of the overlap are endpoints of s or t, hence not roots of g
        if g.degree >= 1 and sturm_count(g, RationalInterval(lo, hi)) >= 1:
            return Ordering.EQUAL
    while True:
        if a.hi <= b.lo:
            return Ordering.LESS
        if b.hi <= a.lo:
            return Ordering.GREATER
        if a.width >= b.width:
            s = s.bisect()
            a = s.isolation
        else:
            t = t.bisect()
            b = t.isolation
