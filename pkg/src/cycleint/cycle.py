"""Cycle integrals ``f~(w)``, ``1~(w)`` and values ``f(w) = f~(w) / 1~(w)``.

The integral of ``f * eta`` from ``z0`` to ``gamma z0`` is independent of the
path, so the default contour is chosen for numerical health rather than
following the closed geodesic.  The matrix of an even word factors as
``gamma_(k1,k2,...) = T**k1 L**k2 ...`` with ``T = [[1,1],[0,1]]`` and
``L = [[1,0],[1,1]] = S T**-1 S**-1``.  Starting at ``z0 = i`` each block is
pulled back by the exact prefix matrix and becomes a horizontal segment
``i -> i + k`` (for ``T**k``) or ``i -> i - k`` (for ``L**k``, after a
further ``S``) at height one, where ``|j| < 2000``.  Only the form changes
from block to block, and its poles are computed exactly.

The geodesic arc from the apex of ``S_w`` to its image is kept as an
independent second route (:func:`geodesic_integral`); it is accurate only
while ``gamma`` applied to the apex stays well above the real axis.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import quadrature
from .modular import ONE, QExpansion, evaluate
from .surds import (
    QuadNumber, QuadraticSurd, apply_extended, automorph, cf_expand, cocycle_j,
    fixed_point, to_float,
)
from .words import (
    EvenWord, Mat2Z, S, concat, gamma_of_word, ladder, ladder_matrix,
    primitive_decomposition, rotate,
)

DEFAULT_TOL = 1e-9
BASE_POINT = 1j

# -- differential forms ---------------------------------------------------

def _as_number(x) -> "QuadNumber | None":
    if x is None or isinstance(x, QuadNumber):
        return x
    if isinstance(x, QuadraticSurd):
        return x.number
    if isinstance(x, float):
        raise TypeError("form endpoints must be exact (int, Fraction, surd) or None")
    return QuadNumber(x)


@dataclass(frozen=True)
class EtaForm:
    """``(1/(z - x') - 1/(z - x)) dz`` with ``1/(z - inf) := 0``.

    Endpoints are exact; ``None`` stands for infinity.  The float
    coefficients are derived once, with ``x' - x`` computed exactly so
    nearby poles do not cancel catastrophically.
    """

    x_prime: object
    x: object
    _floats: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xp, x = _as_number(self.x_prime), _as_number(self.x)
        object.__setattr__(self, "x_prime", xp)
        object.__setattr__(self, "x", x)
        fp = None if xp is None else to_float(xp)
        fx = None if x is None else to_float(x)
        if xp is not None and x is not None:
            try:
                diff = to_float(xp - x)
            except ArithmeticError:
                diff = fp - fx
        else:
            diff = None
        object.__setattr__(self, "_floats", (fp, fx, diff))

    @classmethod
    def of_surd(cls, w: QuadraticSurd) -> "EtaForm":
        """``eta_w`` with poles at ``w'`` and ``w``."""
        return cls(w.conjugate().number, w.number)

    @classmethod
    def of_word(cls, word: Sequence[int]) -> "EtaForm":
        return cls.of_surd(fixed_point(gamma_of_word(word)))

    def __call__(self, z):
        fp, fx, diff = self._floats
        if fp is None and fx is None:
            return np.zeros_like(np.asarray(z, dtype=complex)) if np.ndim(z) else 0j
        if fp is None:
            return -1 / (z - fx)
        if fx is None:
            return 1 / (z - fp)
        return diff / ((z - fp) * (z - fx))

    def pullback(self, g: Mat2Z) -> "EtaForm":
        """``g^* eta_{x', x} = eta_{g^-1 x', g^-1 x}``."""
        gi = g.inverse()
        return EtaForm(apply_extended(gi, self.x_prime), apply_extended(gi, self.x))


def eta_eval(form: EtaForm, z: complex) -> complex:
    if complex(z).imag <= 0:
        raise ValueError(f"point {z} is not in the upper half plane")
    return complex(form(complex(z)))


def eta_pullback_check(g: Mat2Z, form: EtaForm, z: complex) -> float:
    """``|eta(g z) / (c z + d)**2 - (g^* eta)(z)|`` for ``det g = 1``."""
    z = complex(z)
    lhs = form(g.act(z)) / (g.c * z + g.d) ** 2
    return abs(lhs - form.pullback(g)(z))


# -- contours ---------------------------------------------------------------

@dataclass(frozen=True)
class Geodesic:
    w: QuadraticSurd
    w_conj: QuadraticSurd
    center: float
    radius: float

    @classmethod
    def of(cls, w: QuadraticSurd) -> "Geodesic":
        wc = w.conjugate()
        center = to_float((w.number + wc.number) / 2)
        radius = abs(to_float((w.number - wc.number) / 2))
        return cls(w, wc, center, radius)

    @property
    def apex(self) -> complex:
        return complex(self.center, self.radius)

    def point(self, s):
        """Point at signed hyperbolic arc length ``s`` from the apex, towards ``w``."""
        sign = 1.0 if to_float(self.w) > self.center else -1.0
        return self.center + sign * self.radius * np.tanh(s) + 1j * self.radius / np.cosh(s)

    def derivative(self, s):
        sign = 1.0 if to_float(self.w) > self.center else -1.0
        sech = 1 / np.cosh(s)
        return self.radius * sech * (sign * sech - 1j * np.tanh(s))

    def arclength(self, z: complex) -> float:
        sign = 1.0 if to_float(self.w) > self.center else -1.0
        return math.asinh(sign * (z.real - self.center) / z.imag)


def _segment_integral(f: QExpansion, form: EtaForm, z0: complex, z1: complex,
                      tol: float) -> quadrature.QuadResult:
    """Integral of ``f * form`` along the straight segment ``z0 -> z1``."""
    dz = z1 - z0
    if dz == 0:
        return quadrature.QuadResult(0j, 0.0, 0)

    def integrand(t):
        z = z0 + t * dz
        return evaluate(f, z) * form(z) * dz

    # roughly one panel per unit of hyperbolic length
    hyp = abs(dz) / min(z0.imag, z1.imag)
    panels = int(min(256, max(1, math.ceil(hyp))))
    return quadrature.gauss_legendre(integrand, 0.0, 1.0, tol, initial_panels=panels)


def _horizontal_integral(f: QExpansion, form: EtaForm, k: int, tol: float) -> quadrature.QuadResult:
    """Integral of ``f * form`` from ``i`` to ``i + k``."""

    def integrand(t):
        return evaluate(f, t + 1j) * form(t + 1j)

    return quadrature.gauss_legendre(integrand, 0.0, float(k), tol, initial_panels=abs(k))


@dataclass
class _Accumulator:
    value: complex = 0j
    error: float = 0.0
    pieces: int = 0

    def add(self, r: quadrature.QuadResult):
        self.value += r.value
        self.error += r.error
        self.pieces += 1


def ladder_integral(f: QExpansion, blocks: Sequence[tuple[str, int]], form: EtaForm,
                    tol: float = DEFAULT_TOL) -> quadrature.QuadResult:
    """Integral of ``f * form`` from ``i`` to ``G i`` with ``G = ladder_matrix(blocks)``."""
    blocks = [(g, k) for g, k in blocks if k]
    if not blocks:
        return quadrature.QuadResult(0j, 0.0, 0)
    piece_tol = tol / len(blocks)
    acc = _Accumulator()
    prefix = Mat2Z.identity()
    for g, k in blocks:
        if g == "T":
            acc.add(_horizontal_integral(f, form.pullback(prefix), k, piece_tol))
        else:
            acc.add(_horizontal_integral(f, form.pullback(prefix @ S), -k, piece_tol))
        prefix = prefix @ ladder_matrix([(g, k)])
    return quadrature.QuadResult(acc.value, acc.error, acc.pieces)


def _contour_integral(f: QExpansion, blocks, form: EtaForm, z0, tol: float) -> tuple[quadrature.QuadResult, complex]:
    z0 = BASE_POINT if z0 is None else complex(z0)
    if z0.imag <= 0:
        raise ValueError(f"base point {z0} is not in the upper half plane")
    G = ladder_matrix(blocks)
    if z0 == BASE_POINT:
        return ladder_integral(f, blocks, form, tol), z0
    legs = [
        _segment_integral(f, form, z0, BASE_POINT, tol / 3),
        ladder_integral(f, blocks, form, tol / 3),
        # G i -> G z0 pulled back by G: same height as the first leg
        _segment_integral(f, form.pullback(G), BASE_POINT, z0, tol / 3),
    ]
    return quadrature.QuadResult(sum(r.value for r in legs), sum(r.error for r in legs),
                                 sum(r.panels for r in legs)), z0


def tilde_integral(f: QExpansion, word: Sequence[int], form: EtaForm | None = None,
                   z0: complex | None = None, tol: float = DEFAULT_TOL) -> complex:
    """``int_{z0}^{gamma_W z0} f * form`` (default form ``eta_W``, default ``z0 = i``).

    Raises :class:`quadrature.QuadratureError` if ``tol`` is not reached.
    """
    return tilde_integral_result(f, word, form, z0, tol).value


def tilde_integral_result(f, word, form=None, z0=None, tol=DEFAULT_TOL) -> quadrature.QuadResult:
    word = EvenWord(word)
    if not word:
        raise ValueError("tilde_integral needs a non-empty word")
    if form is None:
        form = EtaForm.of_word(word)
    res, _ = _contour_integral(f, ladder(word), form, z0, tol)
    return res


def geodesic_integral(f: QExpansion, word: Sequence[int], form: EtaForm | None = None,
                      tol: float = DEFAULT_TOL, rule: str = "gauss") -> quadrature.QuadResult:
    """Same integral taken along ``S_w`` over one period of ``gamma_W``.

    With the default form the window is centred on the apex; an explicit
    form is integrated from the apex to ``gamma_W`` of the apex.

    ``rule`` is ``"gauss"`` (adaptive Gauss-Legendre) or ``"tanh-sinh"``.
    """
    word = EvenWord(word)
    g = gamma_of_word(word)
    w = fixed_point(g)
    geo = Geodesic.of(w)
    end = geo.arclength(g.act(geo.apex))

    start = 0.0
    if form is None:
        # eta_w(z(s)) z'(s) == 1 identically in the arc-length parameter, and
        # the integrand is gamma-periodic, so centre the window on the apex
        start, end = -end / 2, end / 2

        def integrand(s):
            return evaluate(f, geo.point(s)) + 0j
    else:
        def integrand(s):
            z = geo.point(s)
            return evaluate(f, z) * form(z) * geo.derivative(s)

    span = end - start
    if rule == "gauss":
        return quadrature.gauss_legendre(integrand, start, end, tol, initial_panels=max(1, math.ceil(2 * span)))
    if rule == "tanh-sinh":
        # split into unit pieces so the double-exponential rule sees smooth panels
        edges = np.linspace(start, end, max(1, math.ceil(span)) + 1)
        parts = [quadrature.tanh_sinh(integrand, a, b, tol / (len(edges) - 1))
                 for a, b in zip(edges[:-1], edges[1:])]
        return quadrature.QuadResult(sum(p.value for p in parts), sum(p.error for p in parts), 0)
    raise ValueError(f"unknown rule {rule!r}")


# -- values -----------------------------------------------------------------

def log_quad(x: QuadNumber) -> float:
    """Natural log of a positive field element, safe beyond float range."""
    if x.sign() <= 0:
        raise ValueError("log of non-positive number")
    if x.is_rational:
        return math.log(x.a.numerator) - math.log(x.a.denominator)
    den = x.a.denominator * x.b.denominator
    A, B = x.a.numerator * x.b.denominator, x.b.numerator * x.a.denominator
    bits = 64
    while True:
        root = math.isqrt(B * B * x.D << (2 * bits))
        num = (A << bits) + (root if B > 0 else -root)
        if num >= 1 << 60:
            return math.log(num) - math.log(den) - bits * math.log(2)
        bits += 64


def tilde_1_closed_form(w: QuadraticSurd) -> float:
    """``2 log eps_w``."""
    return 2 * log_quad(automorph(w).epsilon.number)


@dataclass(frozen=True)
class CycleIntegralResult:
    f_tilde: complex
    one_tilde: float
    value: complex
    quadrature_error_estimate: float
    base_point: complex
    closed_form: float
    multiplicity: int = 1
    word: EvenWord | None = None
    surd: QuadraticSurd | None = None
    runtime_ms: float = 0.0

    @property
    def closed_form_discrepancy(self) -> float:
        return abs(self.one_tilde - self.closed_form)

    def to_json(self) -> dict:
        return {
            "f_tilde_re": self.f_tilde.real,
            "f_tilde_im": self.f_tilde.imag,
            "one_tilde": self.one_tilde,
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "one_tilde_closed_form": self.closed_form,
            "closed_form_discrepancy": self.closed_form_discrepancy,
            "err_estimate": self.quadrature_error_estimate,
            "epsilon_w_log": self.closed_form / (2 * self.multiplicity),
            "word": None if self.word is None else str(self.word),
            "surd": None if self.surd is None else str(self.surd),
        }


def _result(f, blocks, form, closed_form, tol, multiplicity, word, surd, z0) -> CycleIntegralResult:
    t0 = time.perf_counter()
    ft, base = _contour_integral(f, blocks, form, z0, tol)
    if f is ONE:
        ot = ft
    else:
        ot, _ = _contour_integral(ONE, blocks, form, z0, tol)
    one = ot.value.real
    err = max(ft.error, ot.error, abs(one - closed_form))
    return CycleIntegralResult(
        ft.value, one, ft.value / one, err, base, closed_form, multiplicity, word, surd,
        (time.perf_counter() - t0) * 1e3)


def tilde_f(f: QExpansion, w: QuadraticSurd, tol: float = DEFAULT_TOL, z0: complex | None = None) -> complex:
    """``int_{z0}^{gamma_w z0} f eta_w`` with the automorph ``gamma_w``."""
    return value(f, w, tol, z0).f_tilde


def _automorph_blocks(w: QuadraticSurd):
    aut = automorph(w)
    blocks = ladder(aut.prefix) + ladder(aut.root) + ladder(aut.prefix, inverse=True)
    assert ladder_matrix(blocks) == aut.gamma
    return aut, blocks


def value(f: QExpansion, w: QuadraticSurd, tol: float = DEFAULT_TOL,
          z0: complex | None = None) -> CycleIntegralResult:
    """``f(w) = f~(w) / 1~(w)`` with the closed form ``2 log eps_w`` alongside."""
    aut, blocks = _automorph_blocks(w)
    closed = 2 * log_quad(aut.epsilon.number)
    return _result(f, blocks, EtaForm.of_surd(w), closed, tol, 1, None, w, z0)


def value_of_word(f: QExpansion, word: Sequence[int], tol: float = DEFAULT_TOL,
                  z0: complex | None = None) -> CycleIntegralResult:
    """``f~(W) / 1~(W)`` for ``w = [W, W, ...]``; equals ``f(w)``.

    The word itself supplies the contour, so the continued fraction of ``w``
    is never recomputed from the surd.
    """
    word = EvenWord(word)
    if not word:
        raise ValueError("value_of_word needs a non-empty word")
    g = gamma_of_word(word)
    w = fixed_point(g)
    _, n = primitive_decomposition(word)
    closed = 2 * log_quad(cocycle_j(g, w))
    return _result(f, ladder(word), EtaForm.of_surd(w), closed, tol, n, word, w, z0)


def decompose_integral(f: QExpansion, words: Sequence[Sequence[int]], tol: float = DEFAULT_TOL,
                       z0: complex | None = None) -> list[complex]:
    """Segment integrals ``int_{z0}^{gamma_{W_i} z0} f eta_{W_i ... W_k W_1 ... W_{i-1}}``."""
    words = [EvenWord(w) for w in words]
    if not words or any(not w for w in words):
        raise ValueError("decompose_integral needs non-empty words")
    out = []
    for i, wi in enumerate(words, start=1):
        form = EtaForm.of_word(concat(rotate(words, i)))
        out.append(tilde_integral(f, wi, form, z0, tol / len(words)))
    return out


# -- proximity --------------------------------------------------------------

def shared_prefix_length(v: QuadraticSurd, w: QuadraticSurd, limit: int = 200) -> int:
    a, b = cf_expand(v, limit), cf_expand(w, limit)
    n = 0
    while n < limit and a[n] == b[n]:
        n += 1
    return n


def proximity_bound(v: QuadraticSurd, w: QuadraticSurd, n: int, y0: float) -> float:
    """``2**(2-n) / y0**2`` after checking that the expansions share ``n`` terms."""
    if y0 <= 0:
        raise ValueError("y0 must be positive")
    if n >= 1 and cf_expand(v, n) != cf_expand(w, n):
        raise ValueError(f"{v} and {w} do not share {n} continued-fraction terms")
    return 2.0 ** (2 - n) / y0 ** 2


def proximity_excess(v: QuadraticSurd, w: QuadraticSurd, n: int, y0: float,
                     points: Sequence[complex]) -> float:
    """Largest ``|1/(z-v) - 1/(z-w)| - bound`` over sample points with ``Im z >= y0``."""
    bound = proximity_bound(v, w, n, y0)
    fv, fw = to_float(v), to_float(w)
    try:
        diff = to_float(v.number - w.number)
    except ArithmeticError:
        diff = fv - fw
    worst = -math.inf
    for z in points:
        if z.imag < y0:
            raise ValueError(f"sample {z} lies below y0 = {y0}")
        worst = max(worst, abs(diff / ((z - fv) * (z - fw))) - bound)
    return worst
