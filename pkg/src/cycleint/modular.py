"""SL2(Z)-invariant functions on the upper half plane from q-expansions.

Evaluation reduces to the standard fundamental domain first, where
``|q| <= exp(-pi*sqrt(3))``, so thirty terms of the j-expansion are far
below double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .words import Mat2Z

SQRT3_2 = math.sqrt(3) / 2
Q_MAX = math.exp(-math.pi * math.sqrt(3))
DEFAULT_ORDER = 30


class ExpansionError(ValueError):
    pass


def reduce_to_fundamental_domain(z: complex, max_steps: int = 10_000) -> tuple[complex, Mat2Z]:
    """Return ``(z_red, g)`` with ``z_red = g(z)``, ``|Re z_red| <= 1/2`` and ``|z_red| >= 1``."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError(f"point {z} is not in the upper half plane")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        n = math.floor(z.real + 0.5)
        if n:
            z -= n
            a, b = a - n * c, b - n * d
        if abs(z) < 1 - 1e-15:
            z = -1 / z
            a, b, c, d = -c, -d, a, b
        else:
            return z, Mat2Z(a, b, c, d)
    raise RuntimeError(f"reduction of {z} did not terminate")


def reduce_array(z: np.ndarray) -> np.ndarray:
    """Vectorized reduction; returns reduced points only."""
    z = np.array(z, dtype=complex)
    if np.any(z.imag <= 0):
        raise ValueError("points must lie in the upper half plane")
    active = np.ones(z.shape, dtype=bool)
    for _ in range(10_000):
        zz = z[active]
        zz = zz - np.floor(zz.real + 0.5)
        inside = np.abs(zz) < 1 - 1e-15
        zz[inside] = -1 / zz[inside]
        z[active] = zz
        idx = np.flatnonzero(active)
        active[idx[~inside]] = False
        if not active.any():
            return z
    raise RuntimeError("vectorized reduction did not terminate")


@dataclass(frozen=True)
class QExpansion:
    """``f(z) = sum_{m=h}^{M} c_m q**m`` with ``q = exp(2*pi*i*z)``.

    ``coefficients[i]`` is ``c_{h+i}``.  ``invariant`` marks SL2(Z)-invariant
    expansions, which are evaluated after reduction to the fundamental domain.
    ``tail`` bounds the omitted terms as a function of the height ``y``.
    """

    h: int
    coefficients: tuple
    invariant: bool = True
    name: str = "f"
    tail: Callable[[float], float] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.h < -1:
            raise ExpansionError(f"pole order {-self.h} at infinity is not supported (h >= -1)")

    @property
    def order(self) -> int:
        return self.h + len(self.coefficients) - 1

    def coefficient(self, m: int):
        i = m - self.h
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else 0

    def tail_bound(self, y: float = SQRT3_2) -> float:
        if self.tail is not None:
            return self.tail(y)
        return _estimated_tail(self.coefficients, self.order, y)

    @property
    def error_bound(self) -> float:
        """Truncation bound on the fundamental domain (``y >= sqrt(3)/2``)."""
        return self.tail_bound(SQRT3_2) if self.invariant else math.inf

    def __call__(self, z):
        return evaluate(self, z)

    def __sub__(self, constant):
        c = list(self.coefficients)
        c[-self.h] -= constant
        return QExpansion(self.h, tuple(c), self.invariant, f"{self.name}-{constant}", self.tail)

    def is_constant(self) -> bool:
        return all(self.coefficient(m) == 0 for m in range(self.h, self.order + 1) if m != 0)


def _estimated_tail(coeffs: Sequence, order: int, y: float) -> float:
    q = math.exp(-2 * math.pi * y)
    nz = [abs(float(c)) for c in coeffs]
    if not any(nz[1:]) or nz[-1] == 0:
        return 0.0
    # geometric extrapolation from the last two coefficients
    ratio = nz[-1] / nz[-2] if len(nz) > 1 and nz[-2] else 1.0
    r = ratio * q
    if r >= 1:
        return math.inf
    return nz[-1] * q ** order * r / (1 - r)


def _horner(coeffs: np.ndarray, h: int, q: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(q)
    for c in coeffs[::-1]:
        acc = acc * q + c
    return acc * q ** h if h else acc


@lru_cache(maxsize=None)
def _float_coefficients(coeffs: tuple) -> np.ndarray:
    return np.array([float(c) for c in coeffs], dtype=float)


def evaluate(f: QExpansion, z):
    """Value of ``f`` at ``z`` (scalar or array); invariant expansions are reduced first."""
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zz.imag <= 0):
        raise ValueError("points must lie in the upper half plane")
    if f.is_constant():
        out = np.full(zz.shape, complex(f.coefficient(0)))
    else:
        if f.invariant:
            zz = reduce_array(zz)
        q = np.exp(2j * np.pi * zz)
        out = _horner(_float_coefficients(f.coefficients), f.h, q)
    return complex(out[0]) if scalar else out


def evaluate_with_error(f: QExpansion, z) -> tuple[complex, float]:
    return evaluate(f, z), f.error_bound


# -- built-in expansions -------------------------------------------------

def _series_mul(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _series_inverse(a: list[int], n: int) -> list[int]:
    if a[0] != 1:
        raise ValueError("series must start with 1")
    inv = [0] * n
    inv[0] = 1
    for k in range(1, n):
        inv[k] = -sum(a[i] * inv[k - i] for i in range(1, min(k, len(a) - 1) + 1))
    return inv


def _sigma3(n: int) -> int:
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def eisenstein_e4(n: int) -> list[int]:
    return [1] + [240 * _sigma3(m) for m in range(1, n)]


def euler_product(n: int) -> list[int]:
    """``prod_{m>=1} (1 - q**m)`` to ``n`` terms via pentagonal numbers."""
    out = [0] * n
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e < n:
                out[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            return out
        k += 1


@lru_cache(maxsize=None)
def j_coefficients(order: int = DEFAULT_ORDER) -> tuple[int, ...]:
    """Exact ``c_{-1}, c_0, ..., c_order`` of ``j = E4**3 / Delta``."""
    n = order + 2
    e4 = eisenstein_e4(n)
    e4_cubed = _series_mul(_series_mul(e4, e4, n), e4, n)
    eta = euler_product(n)
    eta24 = [1] + [0] * (n - 1)
    for _ in range(24):
        eta24 = _series_mul(eta24, eta, n)
    # Delta = q * eta24, so j = q**-1 * E4**3 / eta24
    return tuple(_series_mul(e4_cubed, _series_inverse(eta24, n), n))


def _j_tail(order: int) -> Callable[[float], float]:
    # c_m <= exp(4*pi*sqrt(m)) for m >= 1
    def bound(y: float) -> float:
        total, m = 0.0, order + 1
        while True:
            term = math.exp(4 * math.pi * math.sqrt(m) - 2 * math.pi * y * m)
            total += term
            if term < 1e-30 * max(total, 1e-300) or m > order + 10_000:
                return total
            m += 1
    return bound


def j_expansion(order: int = DEFAULT_ORDER) -> QExpansion:
    if order < 0:
        raise ValueError("truncation order must be >= 0")
    return QExpansion(-1, j_coefficients(order), True, "j", _j_tail(order))


def j1_expansion(order: int = DEFAULT_ORDER) -> QExpansion:
    f = j_expansion(order) - 744
    return QExpansion(f.h, f.coefficients, True, "j1", f.tail)


ONE = QExpansion(0, (1,), True, "one", lambda y: 0.0)
J = j_expansion()
J1 = j1_expansion()


def load_expansion(path: str | Path) -> QExpansion:
    """Read a coefficient file.

    Format: ``h=<int>`` on the first line, then ``<m>=<value>`` lines (missing
    orders are zero) and optionally ``invariant=true|false``.  Lines starting
    with ``#`` are ignored.
    """
    path = Path(path)
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("h="):
        raise ExpansionError(f"{path}: first line must be h=<int>")
    try:
        h = int(lines[0][2:])
    except ValueError:
        raise ExpansionError(f"{path}: bad h line {lines[0]!r}") from None
    if h < -1:
        raise ExpansionError(f"{path}: pole order {-h} at infinity is not supported (h >= -1)")
    invariant = True
    coeffs: dict[int, object] = {}
    for ln in lines[1:]:
        key, sep, value = ln.partition("=")
        if not sep:
            raise ExpansionError(f"{path}: malformed line {ln!r}")
        key, value = key.strip(), value.strip()
        if key == "invariant":
            if value not in ("true", "false"):
                raise ExpansionError(f"{path}: invariant must be true or false")
            invariant = value == "true"
            continue
        try:
            m = int(key)
            c = int(value) if _is_int(value) else float(Fraction(value))
        except ValueError:
            raise ExpansionError(f"{path}: malformed line {ln!r}") from None
        if m < h:
            raise ExpansionError(f"{path}: order {m} below h={h}")
        coeffs[m] = c
    top = max(coeffs, default=h)
    values = tuple(coeffs.get(m, 0) for m in range(h, top + 1))
    return QExpansion(h, values, invariant, path.stem)


def _is_int(s: str) -> bool:
    return s.lstrip("+-").isdigit()


def j_via_eisenstein(z: complex, terms: int = 60) -> complex:
    """``E4(z)**3 / Delta(z)`` with ``Delta = q * prod(1 - q**n)**24`` evaluated at ``z``.

    Sums and multiplies numerically at the point itself, sharing no series
    arithmetic with :func:`j_coefficients`; used to cross-check it.
    """
    q = cmath.exp(2j * math.pi * z)
    e4 = 1 + 240 * sum(_sigma3(n) * q ** n for n in range(1, terms))
    prod = 1
    for n in range(1, terms):
        prod *= 1 - q ** n
    return e4 ** 3 / (q * prod ** 24)


def function_from_spec(spec: str) -> QExpansion:
    """``one``/``1``, ``j``, ``j1``, or a coefficient-file path."""
    key = spec.strip().lower()
    if key in ("1", "one"):
        return ONE
    if key == "j":
        return J
    if key == "j1":
        return J1
    return load_expansion(spec)
