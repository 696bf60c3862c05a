from __future__ import annotations

import cmath
import math
import random

import mpmath
import pytest

from cycleint.cycle import (
    EtaForm, Geodesic, decompose_integral, eta_eval, eta_pullback_check, geodesic_integral,
    proximity_bound, proximity_excess, shared_prefix_length, tilde_1_closed_form, tilde_f,
    tilde_integral, value, value_of_word,
)
from cycleint.modular import J, J1, ONE
from cycleint.quadrature import QuadratureError
from cycleint.surds import QuadNumber, QuadraticSurd, conjugate, fixed_point, papcke_surd, to_float
from cycleint.words import Mat2Z, gamma_of_word

GOLDEN = QuadraticSurd(1, 2, 5)
SILVER = QuadraticSurd(1, 1, 2)


def mp_two_log(x: str) -> float:
    mpmath.mp.dps = 40
    return float(2 * mpmath.log(mpmath.mpmathify(eval(x, {"sqrt": mpmath.sqrt}))))


class TestEtaForm:
    def test_examples(self):
        z = 0.3 + 0.7j
        assert abs(eta_eval(EtaForm(None, 0), z) + 1 / z) < 1e-15
        assert eta_eval(EtaForm(2, 2), z) == 0
        assert abs(eta_eval(EtaForm(-1, 1), 1j) - 1) < 1e-15
        assert eta_eval(EtaForm(None, None), z) == 0

    def test_matches_definition(self):
        form = EtaForm.of_surd(GOLDEN)
        w, wc = to_float(GOLDEN), to_float(conjugate(GOLDEN))
        z = -0.2 + 0.5j
        assert abs(form(z) - (1 / (z - wc) - 1 / (z - w))) < 1e-14

    def test_rejects_floats_and_lower_half_plane(self):
        with pytest.raises(TypeError):
            EtaForm(0.5, 1)
        with pytest.raises(ValueError):
            eta_eval(EtaForm(0, 1), 1 - 1j)

    def test_pullback_examples(self):
        form = EtaForm.of_surd(GOLDEN)
        assert eta_pullback_check(Mat2Z.identity(), form, 1j) == 0
        assert eta_pullback_check(Mat2Z(2, 1, 1, 1), form, 1j) <= 1e-12
        assert eta_pullback_check(Mat2Z(1, 1, 0, 1), EtaForm(-3, 7), 2j) <= 1e-12
        # gamma_w fixes eta_w exactly
        assert form.pullback(Mat2Z(2, 1, 1, 1)) == form

    def test_pullback_through_infinity(self):
        g = Mat2Z(0, -1, 1, 0)
        form = EtaForm(None, 0)
        back = form.pullback(g)
        assert back.x_prime == 0 and back.x is None
        assert eta_pullback_check(g, form, 0.4 + 0.9j) <= 1e-12


class TestGeodesic:
    def test_shape(self):
        geo = Geodesic.of(GOLDEN)
        assert abs(geo.center - 0.5) < 1e-15 and abs(geo.radius - math.sqrt(5) / 2) < 1e-15
        assert abs(geo.apex - (0.5 + 1j * math.sqrt(5) / 2)) < 1e-15
        assert geo.arclength(geo.apex) == 0


class TestClosedForm:
    @pytest.mark.parametrize("word, expr", [((1, 1), "(3+sqrt(5))/2"), ((2, 2), "3+2*sqrt(2)")])
    def test_examples(self, word, expr):
        oracle = mp_two_log(expr)
        assert abs(tilde_integral(ONE, word) - oracle) < 1e-9
        assert abs(tilde_1_closed_form(fixed_point(gamma_of_word(word))) - oracle) < 1e-12

    def test_doubling(self):
        a = tilde_integral(ONE, (1, 2))
        assert abs(tilde_integral(ONE, (1, 2, 1, 2)) - 2 * a) < 2e-9

    def test_huge_unit(self):
        w = fixed_point(gamma_of_word((9, 1) * 60))
        assert tilde_1_closed_form(w) > 0


class TestValues:
    @pytest.mark.parametrize("w", [GOLDEN, SILVER, QuadraticSurd(0, 1, 3), QuadraticSurd(-3, 7, 11)])
    def test_constant_function(self, w):
        r = value(ONE, w)
        assert abs(r.value - 1) < 1e-10
        assert r.one_tilde > 0 and r.closed_form_discrepancy < 1e-9
        assert abs(r.value * r.one_tilde - r.f_tilde) < 1e-12 * abs(r.f_tilde)

    @pytest.mark.parametrize("word", [(1, 1), (1, 2), (2, 1, 1, 3)])
    @pytest.mark.parametrize("rule", ["gauss", "tanh-sinh"])
    def test_ladder_matches_geodesic_route(self, word, rule):
        a = tilde_integral(J, word)
        b = geodesic_integral(J, word, rule=rule).value
        assert abs(a - b) < 1e-8

    def test_tilde_f_matches_word(self):
        assert abs(tilde_f(J, GOLDEN) - tilde_integral(J, (1, 1))) < 2e-9

    def test_galois_conjugate_and_reversal(self):
        for word in [(1, 2, 3, 4), (2, 1, 1, 4, 3, 1)]:
            w = fixed_point(gamma_of_word(word))
            a = tilde_f(J, w)
            assert abs(a - tilde_f(J, conjugate(w))) < 2e-9
            assert abs(a - tilde_integral(J, tuple(reversed(word)))) < 2e-9

    def test_equivalent_surds_share_values(self):
        w = fixed_point(gamma_of_word((2, 3)))
        v = QuadraticSurd.from_number((5 * w.number + 2) / (2 * w.number + 1))
        assert abs(value(J, w).value - value(J, v).value) < 1e-9

    def test_golden_ratio_value_is_real(self):
        r = value_of_word(J, (1, 1))
        assert abs(r.value.imag) < 1e-10

    def test_papcke_ordering(self):
        a20 = abs(value(J1, papcke_surd(20)).value)
        a10 = abs(value(J1, papcke_surd(10)).value)
        assert a20 < a10

    def test_result_json(self):
        r = value_of_word(J, (1, 2))
        d = r.to_json()
        for key in ("f_tilde_re", "f_tilde_im", "one_tilde", "value_re", "value_im",
                    "err_estimate", "epsilon_w_log", "word", "surd"):
            assert key in d
        assert d["word"] == "(1,2)" and abs(d["epsilon_w_log"] * 2 - r.closed_form) < 1e-15

    def test_errors(self):
        with pytest.raises(ValueError):
            tilde_integral(J, ())
        with pytest.raises(ValueError):
            tilde_integral(J, (1, 1), z0=0.5 - 1j)
        with pytest.raises(QuadratureError):
            tilde_integral(J, (3, 4), tol=1e-16)


class TestIdentities:
    @pytest.mark.parametrize("word", [(1, 1), (1, 3), (2, 1, 1, 2)])
    @pytest.mark.parametrize("f", [ONE, J])
    def test_multiplicativity(self, word, f):
        base = tilde_integral(f, word)
        for k in (2, 3):
            assert abs(tilde_integral(f, word * k) - k * base) <= (k + 1) * 1e-9

    def test_decomposition_examples(self):
        segs = decompose_integral(ONE, [(1, 1), (2, 2)])
        # the pieces depend on the base point; only their sum is real
        assert abs(sum(segs).imag) < 1e-12
        assert abs(sum(segs) - tilde_integral(ONE, (1, 1, 2, 2))) < 2e-9
        segs = decompose_integral(J, [(1, 2), (3, 4)])
        assert abs(sum(segs) - tilde_integral(J, (1, 2, 3, 4))) < 2e-9
        assert abs(decompose_integral(J, [(2, 3)])[0] - tilde_integral(J, (2, 3))) < 1e-12

    def test_base_point_independence(self):
        rng = random.Random(11)
        for _ in range(5):
            word = tuple(rng.randint(1, 4) for _ in range(2 * rng.randint(1, 2)))
            geo = Geodesic.of(fixed_point(gamma_of_word(word)))
            # j grows like exp(2 pi y); keep the second point low enough for 1e-9
            others = [0.35 + 1.4j, -0.2 + 0.9j] + ([geo.apex] if geo.apex.imag < 1.6 else [])
            for f in (ONE, J):
                a = tilde_integral(f, word)
                for z0 in others:
                    assert abs(a - tilde_integral(f, word, z0=z0)) <= 2e-9

    def test_high_base_point_reports_failure(self):
        with pytest.raises(QuadratureError, match="estimate"):
            tilde_integral(J, (4, 2, 1, 1), z0=0.4 + 3.5j)


class TestProximity:
    def test_bound_formula(self):
        assert proximity_bound(GOLDEN, GOLDEN, 2, 1.0) == 1.0
        with pytest.raises(ValueError):
            proximity_bound(GOLDEN, SILVER, 3, 1.0)

    def test_ten_shared_terms(self):
        v = GOLDEN
        w = fixed_point(gamma_of_word((1,) * 10 + (2, 2)))
        assert shared_prefix_length(v, w) >= 10
        z = 1j
        diff = abs(1 / (z - to_float(v)) - 1 / (z - to_float(w)))
        assert diff <= 2.0 ** -8
        mpmath.mp.dps = 40
        mv = (v.P + mpmath.sqrt(v.D)) / v.Q
        mw = (w.P + mpmath.sqrt(w.D)) / w.Q
        assert abs(mv - mw) <= 2.0 ** (2 - 10)
        pts = [complex(x, y) for x in (-2, 0, 1.6, 3) for y in (1, 2, 5)]
        assert proximity_excess(v, w, 10, 1.0, pts) <= 0
