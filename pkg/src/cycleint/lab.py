"""Convergence experiments for values along words built from repeated blocks.

A configuration fixes separators ``V_0..V_k``, blocks ``W_1..W_k`` and affine
exponent schedules ``a_i(n) = c_i n + d_i``.  For each ``n`` the word

    V_0 W_1^{a_1(n)} V_1 ... W_k^{a_k(n)} V_k

is fed to :func:`cycleint.cycle.value_of_word` and compared with the weighted
ratio predicted from the blocks alone.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .cycle import DEFAULT_TOL, value, value_of_word
from .modular import QExpansion, function_from_spec
from .surds import fixed_point, papcke_surd
from .wordexpr import expand, parse_word_expr
from .words import EvenWord, gamma_of_word, multiplicity

MAX_WORD_LENGTH = 10_000

COLUMNS = ("n", "word_len", "value_re", "value_im", "limit_re", "limit_im",
           "deviation", "one_tilde", "err_estimate", "runtime_ms")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Schedule:
    c: int
    d: int = 0

    def __post_init__(self):
        if int(self.c) != self.c or int(self.d) != self.d:
            raise ConfigError("schedule coefficients must be integers")
        if self.c < 1:
            raise ConfigError(f"schedule c={self.c} does not diverge (need c >= 1)")

    def __call__(self, n: int) -> int:
        return self.c * n + self.d


@dataclass(frozen=True)
class TheoremConfig:
    v: tuple[EvenWord, ...]
    w: tuple[EvenWord, ...]
    schedules: tuple[Schedule, ...]
    n_values: tuple[int, ...]
    f: QExpansion
    tol: float = DEFAULT_TOL
    f_name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(EvenWord(x) for x in self.v))
        object.__setattr__(self, "w", tuple(EvenWord(x) for x in self.w))
        object.__setattr__(self, "schedules", tuple(
            s if isinstance(s, Schedule) else Schedule(*s) for s in self.schedules))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        k = len(self.w)
        if k == 0:
            raise ConfigError("at least one block W_i is required")
        if len(self.v) != k + 1:
            raise ConfigError(f"need {k + 1} separators V_0..V_{k}, got {len(self.v)}")
        if len(self.schedules) != k:
            raise ConfigError(f"need {k} schedules, got {len(self.schedules)}")
        if any(not b for b in self.w):
            raise ConfigError("blocks W_i must be non-empty")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("n_values must be positive integers")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")

    @property
    def k(self) -> int:
        return len(self.w)

    def weights(self) -> list[float]:
        total = sum(s.c for s in self.schedules)
        return [s.c / total for s in self.schedules]

    def word(self, n: int) -> EvenWord:
        parts = list(self.v[0])
        for block, sched, sep in zip(self.w, self.schedules, self.v[1:]):
            a = sched(n)
            if a < 0:
                raise ConfigError(f"schedule gives negative exponent {a} at n={n}")
            if len(parts) + a * len(block) > MAX_WORD_LENGTH:
                raise ConfigError(f"word at n={n} exceeds {MAX_WORD_LENGTH} entries")
            parts.extend(block * a)
            parts.extend(sep)
        if not parts:
            raise ConfigError(f"word at n={n} is empty")
        if len(parts) > MAX_WORD_LENGTH:
            raise ConfigError(f"word at n={n} exceeds {MAX_WORD_LENGTH} entries")
        return EvenWord(parts)


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    word_len: int
    value: complex
    limit: complex
    deviation: float
    one_tilde: float
    err_estimate: float
    runtime_ms: float

    def flat(self) -> dict:
        return {
            "n": self.n, "word_len": self.word_len,
            "value_re": self.value.real, "value_im": self.value.imag,
            "limit_re": self.limit.real, "limit_im": self.limit.imag,
            "deviation": self.deviation, "one_tilde": self.one_tilde,
            "err_estimate": self.err_estimate, "runtime_ms": self.runtime_ms,
        }

    @classmethod
    def from_flat(cls, d: dict) -> "ExperimentRow":
        return cls(int(d["n"]), int(d["word_len"]),
                   complex(float(d["value_re"]), float(d["value_im"])),
                   complex(float(d["limit_re"]), float(d["limit_im"])),
                   float(d["deviation"]), float(d["one_tilde"]),
                   float(d["err_estimate"]), float(d["runtime_ms"]))


def theorem_limit(cfg: TheoremConfig) -> complex:
    num, den = 0j, 0.0
    for a, block in zip(cfg.weights(), cfg.w):
        w = fixed_point(gamma_of_word(block))
        res = value(cfg.f, w, cfg.tol)
        mult = multiplicity(block)
        num += a * mult * res.f_tilde
        den += a * mult * res.one_tilde
    return num / den


def run_experiment(cfg: TheoremConfig, limit: complex | None = None) -> list[ExperimentRow]:
    if limit is None:
        limit = theorem_limit(cfg)
    words = [(n, cfg.word(n)) for n in cfg.n_values]  # validate every n before any work
    rows = []
    for n, word in sorted(words):
        t0 = time.perf_counter()
        res = value_of_word(cfg.f, word, cfg.tol)
        ms = (time.perf_counter() - t0) * 1e3
        rows.append(ExperimentRow(n, len(word), res.value, limit, abs(res.value - limit),
                                  res.one_tilde, res.quadrature_error_estimate, ms))
    return rows


def fit_decay_exponent(rows: Sequence[ExperimentRow]) -> float:
    """Least-squares slope ``p`` of ``log deviation ~ -p log n``; reported, never asserted."""
    pts = [(r.n, r.deviation) for r in rows if r.deviation > 0]
    if len(pts) < 2:
        return math.nan
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(-np.polyfit(x, y, 1)[0])


def papcke_sequence(f: QExpansion, n_values: Iterable[int], tol: float = DEFAULT_TOL) -> list[tuple[int, complex]]:
    out = []
    for n in n_values:
        if n < 3:
            raise ValueError(f"n={n}: the surd (n+sqrt(n^2-4))/2 needs n >= 3")
        out.append((n, value(f, papcke_surd(n), tol).value))
    return out


# -- configs and tables -------------------------------------------------------

def _word(text: str) -> EvenWord:
    return expand(parse_word_expr(text))


def config_from_dict(data: dict) -> TheoremConfig:
    try:
        f_name = str(data.get("f", "j"))
        return TheoremConfig(
            v=tuple(_word(s) for s in data["v"]),
            w=tuple(_word(s) for s in data["w"]),
            schedules=tuple(Schedule(int(s["c"]), int(s.get("d", 0))) for s in data["schedules"]),
            n_values=tuple(data["n_values"]),
            f=function_from_spec(f_name),
            tol=float(data.get("tol", DEFAULT_TOL)),
            f_name=f_name,
        )
    except KeyError as exc:
        raise ConfigError(f"config is missing field {exc.args[0]!r}") from None
    except (TypeError, AttributeError) as exc:
        raise ConfigError(f"malformed config: {exc}") from None


def load_config(path: str | Path) -> TheoremConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return config_from_dict(data)


def format_rows(rows: Sequence[ExperimentRow], fmt: str = "csv", metadata: dict | None = None) -> str:
    if not rows:
        raise ValueError("no rows to emit")
    flat = [r.flat() for r in sorted(rows, key=lambda r: r.n)]
    if fmt == "json":
        doc = flat if metadata is None else {**metadata, "rows": flat}
        return json.dumps(doc, indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    for key, val in (metadata or {}).items():
        buf.write(f"# {key}={val!r}\n" if isinstance(val, float) else f"# {key}={val}\n")
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in flat:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


def emit(rows: Sequence[ExperimentRow], fmt: str = "csv", destination: str | Path | TextIO | None = None,
         metadata: dict | None = None) -> None:
    text = format_rows(rows, fmt, metadata)
    if destination is None:
        sys.stdout.write(text)
    elif hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


def parse_rows(text: str, fmt: str = "csv") -> list[ExperimentRow]:
    """Inverse of :func:`format_rows`; metadata lines or keys are dropped."""
    if fmt == "json":
        doc = json.loads(text)
        items = doc["rows"] if isinstance(doc, dict) else doc
        return [ExperimentRow.from_flat(d) for d in items]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return [ExperimentRow.from_flat(d) for d in csv.DictReader(lines)]

