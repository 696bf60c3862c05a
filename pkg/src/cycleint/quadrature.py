"""Adaptive quadrature for complex-valued integrands on real intervals.

Integrands are vectorized: they take a float array of parameters and return
a complex array.  Both rules are reentrant and keep no state between calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

Integrand = Callable[[np.ndarray], np.ndarray]

GL_POINTS = 15
MAX_PANELS = 2 ** 14
# panel differences below this multiple of int |f| are treated as converged
ROUNDOFF = 64 * np.finfo(float).eps
_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GL_POINTS)


class QuadratureError(RuntimeError):
    def __init__(self, message: str, value: complex, error: float):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int


def _panel_sums(func: Integrand, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Panel integrals of ``func`` and of ``|func|`` (the latter sets the roundoff floor)."""
    mid, half = (a + b) / 2, (b - a) / 2
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(func(x.ravel()), dtype=complex).reshape(x.shape)
    return half * (fx @ _WEIGHTS), np.abs(half) * (np.abs(fx) @ _WEIGHTS)


def gauss_legendre(func: Integrand, a: float, b: float, tol: float = 1e-9,
                   initial_panels: int = 1, max_panels: int = MAX_PANELS) -> QuadResult:
    """Adaptive composite Gauss-Legendre with recursive bisection.

    A panel is accepted when its one-panel and two-half-panel values differ
    by at most its share of ``tol`` (proportional to its length), or by no
    more than the roundoff level of ``int |func|`` over it; the two halves
    are kept.  The reported error sums those differences and must end up
    below ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        return QuadResult(0j, 0.0, 0)
    length = abs(b - a)
    edges = np.linspace(a, b, max(1, initial_panels) + 1)
    lo, hi = edges[:-1], edges[1:]
    whole, _ = _panel_sums(func, lo, hi)
    total, err, used = 0j, 0.0, 0
    while lo.size:
        mid = (lo + hi) / 2
        left, left_abs = _panel_sums(func, lo, mid)
        right, right_abs = _panel_sums(func, mid, hi)
        halves = left + right
        diff = np.abs(whole - halves)
        ok = (diff <= tol * np.abs(hi - lo) / length) | (diff <= ROUNDOFF * (left_abs + right_abs))
        total += halves[ok].sum()
        err += diff[ok].sum()
        used += int(ok.sum())
        lo, mid, hi = lo[~ok], mid[~ok], hi[~ok]
        if used + 2 * lo.size > max_panels:
            total += halves[~ok].sum()
            err += diff[~ok].sum()
            raise QuadratureError(
                f"Gauss-Legendre budget of {max_panels} panels exhausted "
                f"(estimate {err:.3g} > tol {tol:.3g})", total, err)
        whole = np.concatenate([left[~ok], right[~ok]])
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    if err > tol:
        raise QuadratureError(
            f"Gauss-Legendre stalled at roundoff (estimate {err:.3g} > tol {tol:.3g})", total, err)
    return QuadResult(complex(total), float(err), used)


def tanh_sinh(func: Integrand, a: float, b: float, tol: float = 1e-9,
              max_level: int = 12) -> QuadResult:
    """Double-exponential quadrature, refining the step until successive levels agree."""
    if a == b:
        return QuadResult(0j, 0.0, 0)
    half, mid = (b - a) / 2, (a + b) / 2
    # truncate where the weights underflow relative to double precision
    t_max = 3.2

    def level_sum(h: float, offset_only: bool) -> complex:
        k = np.arange(1, int(t_max / h) + 1)
        t = k * h if not offset_only else (k - 0.5) * h
        t = t[t <= t_max]
        u = 0.5 * math.pi * np.sinh(t)
        x = np.tanh(u)
        w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
        keep = x < 1.0
        x, w = x[keep], w[keep]
        nodes = np.concatenate([mid + half * x, mid - half * x])
        if not offset_only:
            nodes = np.concatenate([[mid], nodes])
            ww = np.concatenate([[0.5 * math.pi], w, w])
        else:
            ww = np.concatenate([w, w])
        fx = np.asarray(func(nodes), dtype=complex)
        return complex(fx @ ww)

    h = 0.5
    s = level_sum(h, False)
    prev = s * h * half
    for _ in range(max_level):
        s += level_sum(h, True)
        h /= 2
        cur = s * h * half
        if abs(cur - prev) <= tol:
            return QuadResult(cur, abs(cur - prev), 0)
        prev = cur
    raise QuadratureError(f"tanh-sinh did not reach tol {tol:.3g}", prev, float("nan"))
