"""Randomized invariant suites behind ``cycleint verify``.

Each suite draws its cases from ``random.Random(seed)`` and returns
:class:`Check` records that contain no timings, so reports are byte-identical
for a fixed seed and tolerance.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .cycle import (
    DEFAULT_TOL, EtaForm, decompose_integral, eta_pullback_check, tilde_integral, value_of_word,
)
from .modular import J, ONE
from .surds import (
    QuadraticSurd, automorph, fixed_point, matrix_from_unit, minimal_polynomial, periodic_form,
    stabilizes, unit_from_matrix,
)
from .wordexpr import parse_word_expr, to_text
from .words import EvenWord, Mat2Z, S, T, continuant_matrix, gamma_of_word, primitive_decomposition

PULLBACK_TOL = 1e-11


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    worst: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, case: dict, residual: float = 0.0):
        self.cases += 1
        self.worst = max(self.worst, residual)
        if not ok and len(self.failures) < 5:
            self.failures.append(case)

    def to_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "cases": self.cases,
                "worst_residual": self.worst, "counterexamples": self.failures}


def random_word(rng: random.Random, max_entry: int = 5, max_len: int = 8) -> EvenWord:
    n = 2 * rng.randint(1, max_len // 2)
    return EvenWord(rng.randint(1, max_entry) for _ in range(n))


def random_sl2(rng: random.Random, length: int = 4) -> Mat2Z:
    """Random word in the generators ``T**k`` and ``S``."""
    g = Mat2Z.identity()
    for _ in range(rng.randint(1, length)):
        g = g @ T ** rng.randint(-3, 3) @ S
    return g


def random_form(rng: random.Random) -> EtaForm:
    w = fixed_point(gamma_of_word(random_word(rng, 4, 4)))
    pick = rng.random()
    if pick < 0.1:
        return EtaForm(None, w.number)
    if pick < 0.2:
        return EtaForm(w.conjugate().number, None)
    return EtaForm.of_surd(w)


def random_point(rng: random.Random) -> complex:
    return complex(rng.uniform(-3, 3), rng.uniform(0.3, 3))


def suite_words(rng: random.Random, budget: int, tol: float) -> list[Check]:
    hom, root, parse = Check("gamma_homomorphism"), Check("primitive_power"), Check("expr_roundtrip")
    for _ in range(budget):
        a, b = random_word(rng), random_word(rng)
        hom.record(gamma_of_word(a + b) == gamma_of_word(a) @ gamma_of_word(b),
                   {"a": str(a), "b": str(b)})
        W = a * rng.randint(1, 3)
        r, n = primitive_decomposition(W)
        root.record(gamma_of_word(W) == gamma_of_word(r) ** n and r * n == W, {"W": str(W)})
        text = f"{a}^{rng.randint(0, 3)} ({b})^m"
        e = parse_word_expr(text)
        parse.record(parse_word_expr(to_text(e)) == e, {"text": text})
    return [hom, root, parse]


def suite_surds(rng: random.Random, budget: int, tol: float) -> list[Check]:
    conj, form, iso = Check("automorph_conjugation"), Check("periodic_form"), Check("unit_isomorphism")
    for _ in range(budget):
        W = random_word(rng, 4, 6) * rng.randint(1, 2)
        g = gamma_of_word(W)
        w = fixed_point(g)
        aut = automorph(w)
        _, n = primitive_decomposition(W)
        conj.record(stabilizes(g, w) and aut.gamma ** n == g, {"W": str(W)})
        v = QuadraticSurd(rng.randint(-20, 20), 2 * rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([2, 3, 5, 7, 13, 21]))
        pf = periodic_form(v)
        gv, gw = continuant_matrix(pf.even_prefix), gamma_of_word(pf.even_period)
        a = automorph(v)
        form.record(gv @ gw @ gv.inverse() == a.gamma and len(pf.even_period) % 2 == 0, {"surd": str(v)})
        mp = minimal_polynomial(v)
        for k in range(1, 4):
            m = a.gamma ** k
            u = unit_from_matrix(m, v)
            iso.record(matrix_from_unit(u, mp) == m and u.norm == m.det, {"surd": str(v), "k": k})
    return [conj, form, iso]


def suite_pullback(rng: random.Random, budget: int, tol: float) -> list[Check]:
    chk = Check("pullback")
    for _ in range(budget * 100):
        g, form, z = random_sl2(rng), random_form(rng), random_point(rng)
        res = eta_pullback_check(g, form, z)
        scale = max(1.0, abs(form.pullback(g)(z)))
        chk.record(res <= PULLBACK_TOL * scale, {"g": str(g), "z": repr(z)}, res / scale)
    return [chk]


def suite_closedform(rng: random.Random, budget: int, tol: float) -> list[Check]:
    chk = Check("closed_form_one_tilde")
    for _ in range(budget):
        W = random_word(rng, 4, 6)
        r = value_of_word(ONE, W, tol)
        d = r.closed_form_discrepancy
        chk.record(d <= tol, {"W": str(W), "numeric": r.one_tilde, "closed": r.closed_form}, d)
    return [chk]


def suite_decompose(rng: random.Random, budget: int, tol: float) -> list[Check]:
    chk = Check("segment_decomposition")
    for _ in range(budget):
        parts = [random_word(rng, 3, 4) for _ in range(rng.choice([2, 3]))]
        whole = EvenWord(sum(parts, EvenWord()))
        direct = tilde_integral(J, whole, tol=tol)
        segs = decompose_integral(J, parts, tol)
        d = abs(sum(segs) - direct)
        chk.record(d <= (len(parts) + 1) * tol, {"parts": [str(p) for p in parts]}, d)
    return [chk]


def suite_basepoint(rng: random.Random, budget: int, tol: float) -> list[Check]:
    chk = Check("base_point_independence")
    for _ in range(budget):
        W = random_word(rng, 4, 4)
        z0 = complex(round(rng.uniform(-0.5, 0.5), 3), round(rng.uniform(0.8, 2.0), 3))
        a = tilde_integral(J, W, tol=tol)
        b = tilde_integral(J, W, z0=z0, tol=tol)
        d = abs(a - b)
        chk.record(d <= 2 * tol, {"W": str(W), "z0": repr(z0)}, d)
    return [chk]


SUITES: dict[str, Callable[[random.Random, int, float], list[Check]]] = {
    "words": suite_words,
    "surds": suite_surds,
    "pullback": suite_pullback,
    "closedform": suite_closedform,
    "decompose": suite_decompose,
    "basepoint": suite_basepoint,
}


def run_suite(name: str, seed: int = 0, budget: int = 10, tol: float = DEFAULT_TOL) -> dict:
    if name != "all" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    names = list(SUITES) if name == "all" else [name]
    checks = []
    for nm in names:
        # one stream per suite so "all" reproduces each single-suite run
        rng = random.Random(f"{seed}:{nm}")
        checks.extend({"suite": nm, **c.to_json()} for c in SUITES[nm](rng, budget, tol))
    return {"suite": name, "seed": seed, "budget": budget, "tol": tol,
            "passed": all(c["passed"] for c in checks), "checks": checks}
