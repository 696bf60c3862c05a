"""Exact arithmetic with real quadratic irrationals.

Two value types live here.  :class:`QuadNumber` is a general element
``a + b*sqrt(D)`` of a real quadratic field with rational ``a, b``.
:class:`QuadraticSurd` is an irrational element in the normalized form
``(P + sqrt(D)) / Q`` used by the continued-fraction recursion.  Everything
is exact: floors go through :func:`math.isqrt`, signs are decided by
squaring, and floats only appear in :func:`to_float`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .words import EvenWord, Mat2Z, continuant_matrix, primitive_decomposition

Rational = Union[int, Fraction]


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadNumber:
    """``a + b*sqrt(D)`` with rational ``a``, ``b``; ``D`` a positive integer."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a: Rational, b: Rational = 0, D: int = 1):
        a, b = Fraction(a), Fraction(b)
        if D <= 0:
            raise ValueError(f"radicand must be positive, got {D}")
        if b and is_square(D):
            a, b, D = a + b * math.isqrt(D), Fraction(0), 1
        if not b:
            D = 1
        self.a, self.b, self.D = a, b, D

    # -- field plumbing -------------------------------------------------
    def _coerce(self, other) -> "QuadNumber | None":
        if isinstance(other, QuadNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber(other)
        if isinstance(other, QuadraticSurd):
            return other.number
        return None

    def _common(self, other: "QuadNumber") -> int:
        if self.D == 1:
            return other.D
        if other.D == 1 or other.D == self.D:
            return self.D
        # same field with different radicands: D1*D2 must be a square
        if is_square(self.D * other.D):
            return self.D
        raise ArithmeticError(f"elements of Q(sqrt({self.D})) and Q(sqrt({other.D})) do not mix")

    def _rescaled(self, D: int) -> tuple[Fraction, Fraction]:
        if self.D == D or not self.b:
            return self.a, self.b
        # b*sqrt(D1) = b*(sqrt(D1*D)/D)*sqrt(D)
        return self.a, self.b * math.isqrt(self.D * D) / D

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        D = self._common(other)
        a1, b1 = self._rescaled(D)
        a2, b2 = other._rescaled(D)
        return QuadNumber(a1 + a2, b1 + b2, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        D = self._common(other)
        a1, b1 = self._rescaled(D)
        a2, b2 = other._rescaled(D)
        return QuadNumber(a1 * a2 + b1 * b2 * D, a1 * b2 + a2 * b1, D)

    __rmul__ = __mul__

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        c = self.conjugate()
        return QuadNumber(c.a / n, c.b / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        out = QuadNumber(1)
        for _ in range(abs(n)):
            out = out * base
        return out

    def conjugate(self) -> "QuadNumber":
        return QuadNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: the larger square wins
        return sa if self.a * self.a > self.b * self.b * self.D else sb

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        try:
            return (self - other).sign() == 0
        except ArithmeticError:
            return False

    def __hash__(self):
        if self.is_rational:
            return hash(self.a)
        # hash by square-free part so equal values in rescaled fields agree
        s, k = _squarefree(self.D)
        return hash((self.a, self.b * k, s))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return to_float(self)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        if self.is_rational:
            return f"QuadNumber({self.a})"
        return f"QuadNumber({self.a} + {self.b}*sqrt({self.D}))"


def _squarefree(D: int) -> tuple[int, int]:
    """``D = s * k**2`` with ``s`` square-free (trial division; D is small in practice)."""
    s, k, p = D, 1, 2
    while p * p <= s:
        while s % (p * p) == 0:
            s //= p * p
            k *= p
        p += 1
    return s, k


def to_float(x: "QuadNumber | QuadraticSurd | Rational", precision: float = 1e-16) -> float:
    """Float value of an exact field element with relative error about ``precision``.

    ``sqrt(D)`` is taken with the integer square root at a scale large enough
    that truncation is below ``precision`` even under cancellation.
    """
    if precision <= 0:
        raise ValueError("precision must be positive")
    if isinstance(x, QuadraticSurd):
        x = x.number
    elif not isinstance(x, QuadNumber):
        return float(Fraction(x))
    if x.is_rational:
        return float(x.a)
    den = x.a.denominator * x.b.denominator
    A = x.a.numerator * x.b.denominator
    B = x.b.numerator * x.a.denominator
    # x = (A + B*sqrt(D)) / den
    target = max(2, math.ceil(2 / min(precision, 2.0 ** -53)))
    bits = 64
    while True:
        root = math.isqrt(B * B * x.D << (2 * bits))
        num = (A << bits) + (root if B > 0 else -root)
        # |error in num| <= 1 after flooring
        if abs(num) >= target:
            return float(Fraction(num, den << bits))
        bits += 64


class QuadraticSurd:
    """Irrational real quadratic number ``(P + sqrt(D)) / Q``.

    The stored form is canonical: with the primitive integer polynomial
    ``a*x**2 + b*x + c`` whose root ``(-b + sqrt(b**2 - 4ac)) / (2a)`` is this
    number, ``P = -b``, ``Q = 2a`` and ``D = b**2 - 4ac``.  Then ``Q`` divides
    ``D - P**2`` and equal numbers have identical ``(P, Q, D)``.
    """

    __slots__ = ("P", "Q", "D")

    def __init__(self, P: int, Q: int, D: int):
        if Q == 0:
            raise ValueError("Q must be nonzero")
        if D <= 0 or is_square(D):
            raise ValueError(f"D = {D} must be a positive non-square")
        A, B, C = Q * Q, -2 * P * Q, P * P - D
        g = math.gcd(A, B, C)
        A, B, C = A // g, B // g, C // g
        if Q < 0:
            A, B, C = -A, -B, -C
        self.P, self.Q, self.D = -B, 2 * A, B * B - 4 * A * C

    @classmethod
    def from_number(cls, x: QuadNumber) -> "QuadraticSurd":
        if x.is_rational:
            raise ValueError(f"{x} is rational")
        # x = a + b*sqrt(D) = (a*m + sqrt(b**2 m**2 D)) / m with m clearing denominators
        m = math.lcm(x.a.denominator, x.b.denominator)
        a, b = int(x.a * m), int(x.b * m)
        if b > 0:
            return cls(a, m, b * b * x.D)
        return cls(-a, -m, b * b * x.D)

    @classmethod
    def parse(cls, text: str) -> "QuadraticSurd":
        """Parse ``(P+sqrt(D))/Q`` or ``(P-sqrt(D))/Q``; ``/Q`` is optional."""
        s = "".join(text.split())
        m = re.fullmatch(r"\(?(-?\d+)?([+-])sqrt\((\d+)\)\)?(?:/(-?\d+))?", s)
        if not m:
            raise ValueError(f"not a surd literal: {text!r}")
        P = int(m.group(1) or 0)
        D = int(m.group(3))
        Q = int(m.group(4) or 1)
        if m.group(2) == "-":
            P, Q = -P, -Q
        return cls(P, Q, D)

    @property
    def number(self) -> QuadNumber:
        return QuadNumber(Fraction(self.P, self.Q), Fraction(1, self.Q), self.D)

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.P, -self.Q, self.D)

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self.P, self.Q, self.D) == (other.P, other.Q, other.D)
        if isinstance(other, (QuadNumber, int, Fraction)):
            return self.number == other
        return NotImplemented

    def __hash__(self):
        return hash(self.number)

    def __lt__(self, other):
        return self.number < other

    def __gt__(self, other):
        return self.number > other

    def __le__(self, other):
        return self.number <= other

    def __ge__(self, other):
        return self.number >= other

    def __float__(self):
        return to_float(self)

    def __str__(self):
        if self.Q > 0:
            return f"({self.P}+sqrt({self.D}))/{self.Q}"
        return f"({-self.P}-sqrt({self.D}))/{-self.Q}"

    def __repr__(self):
        return f"QuadraticSurd({self})"

    def is_reduced(self) -> bool:
        c = self.conjugate()
        return self > 1 and c < 0 and c > -1

    def to_json(self) -> dict:
        return {"P": str(self.P), "Q": str(self.Q), "D": str(self.D)}

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticSurd":
        return cls(int(data["P"]), int(data["Q"]), int(data["D"]))


def conjugate(w: QuadraticSurd) -> QuadraticSurd:
    return w.conjugate()


@dataclass(frozen=True)
class MinimalPolynomial:
    """``a*x**2 + b*x + c`` with ``gcd(a, b, c) = 1``.

    The sign is fixed by requiring ``w = (-b + sqrt(b**2 - 4ac)) / (2a)``;
    this makes ``a > 0`` whenever ``w`` is the larger root.
    """

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x):
        return self.a * x * x + self.b * x + self.c


def minimal_polynomial(w: QuadraticSurd) -> MinimalPolynomial:
    a = w.Q // 2
    return MinimalPolynomial(a, -w.P, (w.P * w.P - w.D) // (2 * w.Q))


@dataclass(frozen=True)
class QuadUnit:
    """The unit ``(x + y*sqrt(D)) / 2``."""

    x: int
    y: int
    D: int

    @property
    def norm(self) -> int:
        n4 = self.x * self.x - self.D * self.y * self.y
        if n4 % 4:
            raise ArithmeticError(f"{self} is not an algebraic integer")
        return n4 // 4

    @property
    def number(self) -> QuadNumber:
        return QuadNumber(Fraction(self.x, 2), Fraction(self.y, 2), self.D)

    def __mul__(self, other: "QuadUnit") -> "QuadUnit":
        if self.D != other.D:
            raise ArithmeticError("units from different orders")
        x = (self.x * other.x + self.D * self.y * other.y) // 2
        y = (self.x * other.y + other.x * self.y) // 2
        return QuadUnit(x, y, self.D)

    def __pow__(self, n: int) -> "QuadUnit":
        if n < 0:
            base = QuadUnit(self.x * self.norm, -self.y * self.norm, self.D)
        else:
            base = self
        out = QuadUnit(2, 0, self.D)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __float__(self):
        return to_float(self.number)

    def __str__(self):
        return f"({self.x}+{self.y}*sqrt({self.D}))/2"


# -- continued fractions -----------------------------------------------

def _cf_state(w: QuadraticSurd) -> tuple[int, int, int]:
    return w.P, w.Q, w.D


def _cf_step(P: int, Q: int, D: int, s: int) -> tuple[int, int, int]:
    """One step of the (P, Q) recursion; ``s = isqrt(D)``."""
    k = (P + s) // Q if Q > 0 else (P + s + 1) // Q
    P2 = k * Q - P
    Q2 = (D - P2 * P2) // Q
    return k, P2, Q2


def cf_expand(w: QuadraticSurd, n: int) -> list[int]:
    if n < 1:
        raise ValueError("need at least one partial quotient")
    P, Q, D = _cf_state(w)
    s = math.isqrt(D)
    out = []
    for _ in range(n):
        k, P, Q = _cf_step(P, Q, D, s)
        out.append(k)
    return out


@dataclass(frozen=True)
class PeriodicForm:
    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    even_prefix: tuple[int, ...]
    even_period: EvenWord


def periodic_form(w: QuadraticSurd) -> PeriodicForm:
    """Minimal preperiod and period of the continued fraction of ``w``.

    Also returns an even pair ``(V, W)`` with ``w = [V, W, W, ...]``: an odd
    period is doubled, and an odd preperiod absorbs the first period entry
    (rotating the period by one).  ``V`` may start with a non-positive entry
    when ``w < 1``, so it is returned as a plain tuple.
    """
    P, Q, D = _cf_state(w)
    s = math.isqrt(D)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(quotients)
        k, P, Q = _cf_step(P, Q, D, s)
        quotients.append(k)
    start = seen[(P, Q)]
    pre, per = tuple(quotients[:start]), tuple(quotients[start:])
    V, W = pre, per
    if len(W) % 2:
        W = W + W
    if len(V) % 2:
        V = V + W[:1]
        W = W[1:] + W[:1]
    return PeriodicForm(pre, per, V, EvenWord(W))


# -- Moebius action and stabilizers -------------------------------------

def _coefficients(w: QuadraticSurd) -> tuple[int, int, int]:
    """Primitive ``(A, B, C)`` with ``w = (-B + sqrt(B**2 - 4AC)) / (2A)``."""
    return w.Q // 2, -w.P, (w.P * w.P - w.D) // (2 * w.Q)


def moebius_apply(g: Mat2Z, w: "QuadraticSurd | QuadNumber"):
    """Exact ``(a*w + b) / (c*w + d)``; returns a surd when ``w`` is one."""
    if not isinstance(w, QuadraticSurd):
        return (g.a * w + g.b) / (g.c * w + g.d)
    A, B, C = _coefficients(w)
    a, b, c, d = g.a, g.b, g.c, g.d
    # substitute x = (d*y - b) / (-c*y + a) and clear denominators
    A2 = A * d * d - B * c * d + C * c * c
    B2 = -2 * A * b * d + B * (a * d + b * c) - 2 * C * a * c
    C2 = A * b * b - B * a * b + C * a * a
    if A2 == 0:
        raise ZeroDivisionError(f"{g} sends {w} to infinity")
    # the image keeps the sign of the sqrt(D) root exactly when det(g) > 0
    if g.det > 0:
        return QuadraticSurd(-B2, 2 * A2, B2 * B2 - 4 * A2 * C2)
    return QuadraticSurd(B2, -2 * A2, B2 * B2 - 4 * A2 * C2)


def apply_extended(g: Mat2Z, x: "QuadNumber | None") -> "QuadNumber | None":
    """Moebius action on the projective line; ``None`` stands for infinity."""
    if x is None:
        return None if g.c == 0 else QuadNumber(Fraction(g.a, g.c))
    x = x.number if isinstance(x, QuadraticSurd) else x
    if not isinstance(x, QuadNumber):
        x = QuadNumber(x)
    den = g.c * x + g.d
    if den == 0:
        return None
    return (g.a * x + g.b) / den


def cocycle_j(g: Mat2Z, w: "QuadraticSurd | QuadNumber") -> QuadNumber:
    x = w.number if isinstance(w, QuadraticSurd) else w
    return g.c * x + g.d


def fixed_point(g: Mat2Z) -> QuadraticSurd:
    """Attracting fixed point of a hyperbolic matrix.

    For ``g = gamma_of_word(W)`` this is the reduced surd ``[W, W, ...]``.
    """
    if abs(g.trace) <= 2:
        raise ValueError(f"{g} is not hyperbolic (|trace| <= 2)")
    if g.c == 0:
        raise ValueError(f"{g} fixes infinity")
    # c*w**2 + (d - a)*w - b = 0
    disc = (g.d - g.a) ** 2 + 4 * g.b * g.c
    roots = [QuadraticSurd(g.a - g.d, 2 * g.c, disc), QuadraticSurd(g.d - g.a, -2 * g.c, disc)]
    for w in roots:
        if abs(cocycle_j(g, w)) > 1:
            return w
    raise AssertionError("hyperbolic matrix without attracting fixed point")


def stabilizes(g: Mat2Z, w: QuadraticSurd) -> bool:
    # g fixes w iff c*x**2 + (d - a)*x - b is a multiple of w's minimal polynomial
    A, B, C = _coefficients(w)
    u = (g.c, g.d - g.a, -g.b)
    return u[0] * B == u[1] * A and u[0] * C == u[2] * A and u[1] * C == u[2] * B


@dataclass(frozen=True)
class Automorph:
    gamma: Mat2Z
    epsilon: QuadUnit
    prefix: tuple[int, ...]
    root: EvenWord


def automorph(w: QuadraticSurd) -> Automorph:
    """The generator ``gamma_w`` of the stabilizer with ``c*w + d > 1``.

    Built as ``gamma_V @ gamma_W0 @ gamma_V**-1`` from the even periodic form
    ``w = [V, W, W, ...]`` and the primitive root ``W0`` of ``W``.
    """
    pf = periodic_form(w)
    root, _ = primitive_decomposition(pf.even_period)
    gV = continuant_matrix(pf.even_prefix)
    gamma = gV @ continuant_matrix(root) @ gV.inverse()
    eps = unit_from_matrix(gamma, w)
    return Automorph(gamma, eps, pf.even_prefix, root)


def unit_from_matrix(g: Mat2Z, w: QuadraticSurd) -> QuadUnit:
    """Image of a stabilizer element under ``g -> c*w + d``."""
    if not stabilizes(g, w):
        raise ValueError(f"{g} does not stabilize {w}")
    a = w.Q // 2
    xn, yn = g.c * w.P + g.d * w.Q, g.c
    if xn % a or yn % a:
        raise ValueError(f"{g} does not stabilize {w} over Z[a*w]")
    return QuadUnit(xn // a, yn // a, w.D)


def matrix_from_unit(u: QuadUnit, mp: MinimalPolynomial) -> Mat2Z:
    if (u.x - mp.b * u.y) % 2:
        raise ValueError(f"unit {u} violates x = b*y (mod 2) for {mp}")
    if u.D != mp.discriminant:
        raise ValueError(f"unit radicand {u.D} differs from discriminant {mp.discriminant}")
    return Mat2Z((u.x - mp.b * u.y) // 2, -mp.c * u.y, mp.a * u.y, (u.x + mp.b * u.y) // 2)


def sigma_matrix(w: QuadraticSurd) -> tuple[QuadNumber, QuadNumber, QuadNumber, QuadNumber]:
    """Real matrix sending 0 to ``w`` and infinity to ``w'``; determinant 1."""
    x, xc = w.number, w.conjugate().number
    diff = xc - x
    return (xc, x / diff, QuadNumber(1), 1 / diff)


def conjugate_by(sigma, g: Mat2Z):
    """``sigma**-1 @ g @ sigma`` for a determinant-one matrix over a quadratic field."""
    a, b, c, d = sigma
    ia, ib, ic, id_ = d, -b, -c, a
    m = (g.a * a + g.b * c, g.a * b + g.b * d, g.c * a + g.d * c, g.c * b + g.d * d)
    return (
        ia * m[0] + ib * m[2], ia * m[1] + ib * m[3],
        ic * m[0] + id_ * m[2], ic * m[1] + id_ * m[3],
    )


def papcke_surd(n: int) -> QuadraticSurd:
    """``(n + sqrt(n**2 - 4)) / 2``, the larger root of ``x**2 - n*x + 1``."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    return QuadraticSurd(n, 2, n * n - 4)
