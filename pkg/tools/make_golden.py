"""Regenerate tests/data/golden.json.

Each entry is computed twice: along the ladder contour with adaptive
Gauss-Legendre, and along the geodesic arc with tanh-sinh at a tighter
tolerance.  The entry is written only if both routes agree to 1e-8.

    python3 tools/make_golden.py
"""

from __future__ import annotations

import json
import platform
import sys
from datetime import date
from pathlib import Path

import numpy as np

from cycleint.cycle import geodesic_integral, value_of_word
from cycleint.modular import J, J1, ONE
from cycleint.words import EvenWord

AGREEMENT = 1e-8
CASES = [("j", J, (1, 1)), ("j", J, (2, 2)), ("j", J, (1, 2)), ("j1", J1, (1, 1, 1, 2)), ("one", ONE, (3, 1))]


def entry(name, f, word):
    word = EvenWord(word)
    ladder = value_of_word(f, word, tol=1e-10)
    geo_f = geodesic_integral(f, word, tol=1e-10, rule="tanh-sinh")
    geo_1 = geodesic_integral(ONE, word, tol=1e-10, rule="tanh-sinh")
    geo_value = geo_f.value / geo_1.value.real
    gap = abs(ladder.value - geo_value)
    if gap > AGREEMENT:
        raise SystemExit(f"{name}{word}: routes disagree by {gap:.3g}")
    return {
        "function": name,
        "word": str(word),
        "surd": str(ladder.surd),
        "value_re": ladder.value.real,
        "value_im": ladder.value.imag,
        "f_tilde_re": ladder.f_tilde.real,
        "f_tilde_im": ladder.f_tilde.imag,
        "one_tilde": ladder.one_tilde,
        "route_gap": gap,
    }


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "tests" / "data" / "golden.json"
    doc = {
        "provenance": {
            "method": "ladder contour + adaptive Gauss-Legendre (tol 1e-10) versus geodesic arc "
                      "+ tanh-sinh (tol 1e-10); frozen only where both agree to 1e-8",
            "generator": "tools/make_golden.py",
            "date": date.today().isoformat(),
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "platform": platform.platform(),
        },
        "agreement": AGREEMENT,
        "entries": [entry(*case) for case in CASES],
    }
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(doc['entries'])} entries to {out}")


if __name__ == "__main__":
    main()
