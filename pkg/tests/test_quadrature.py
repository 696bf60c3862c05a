from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from cycleint.quadrature import QuadratureError, gauss_legendre, tanh_sinh


def scipy_complex(f, a, b):
    warnings.simplefilter("ignore", integrate.IntegrationWarning)
    re = integrate.quad(lambda t: f(np.array([t]))[0].real, a, b, epsabs=1e-14, limit=500)[0]
    im = integrate.quad(lambda t: f(np.array([t]))[0].imag, a, b, epsabs=1e-14, limit=500)[0]
    return complex(re, im)


CASES = [
    (lambda t: np.exp(1j * t) * np.cos(3 * t), 0.0, 4.0),
    (lambda t: 1 / (t - 0.5 - 0.05j), 0.0, 1.0),
    (lambda t: np.sqrt(t + 1e-3) + 0j, 0.0, 2.0),
    (lambda t: np.exp(-t * t) * (1 + 2j), -5.0, 5.0),
]


@pytest.mark.parametrize("f, a, b", CASES)
@pytest.mark.parametrize("rule", [gauss_legendre, tanh_sinh])
def test_against_scipy(f, a, b, rule):
    res = rule(f, a, b, tol=1e-10)
    assert abs(res.value - scipy_complex(f, a, b)) < 1e-9


def test_polynomial_exact():
    res = gauss_legendre(lambda t: t ** 20 + 0j, 0.0, 1.0, tol=1e-12)
    assert abs(res.value - 1 / 21) < 1e-15


def test_reversed_interval_and_empty():
    f = lambda t: np.exp(t) + 0j
    assert abs(gauss_legendre(f, 1.0, 0.0).value + (math.e - 1)) < 1e-12
    assert gauss_legendre(f, 1.0, 1.0).value == 0


def test_error_estimate_is_conservative():
    f = lambda t: 1 / (t - 0.5 - 0.01j)
    res = gauss_legendre(f, 0.0, 1.0, tol=1e-8)
    assert abs(res.value - scipy_complex(f, 0.0, 1.0)) <= max(res.error, 1e-13)


def test_budget_exhaustion_reports_estimate():
    with pytest.raises(QuadratureError) as info:
        gauss_legendre(lambda t: np.sign(t - 1 / 3) + 0j, -1.0, 1.0, tol=1e-12, max_panels=8)
    assert info.value.error > 1e-12 and "budget" in str(info.value)


def test_bad_tolerance():
    with pytest.raises(ValueError):
        gauss_legendre(lambda t: t + 0j, 0.0, 1.0, tol=0)
