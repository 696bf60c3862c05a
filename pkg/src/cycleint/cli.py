"""Command-line front end: ``cycleint word|eval|verify|limit``.

Exit codes: 0 success, 1 usage or input error, 2 computation failure.
Errors produce a single line on stderr and nothing on stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import lab, verify
from .cycle import DEFAULT_TOL, value, value_of_word
from .modular import ExpansionError, function_from_spec
from .quadrature import QuadratureError
from .surds import QuadraticSurd, automorph, fixed_point, papcke_surd, to_float
from .wordexpr import expand, parse_word_expr, symbols
from .words import WordError, gamma_of_word, primitive_decomposition


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _binding(text: str) -> tuple[str, int]:
    name, sep, val = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"binding {text!r} is not of the form sym=int")
    try:
        return name.strip(), int(val)
    except ValueError:
        raise argparse.ArgumentTypeError(f"binding {text!r} has a non-integer value") from None


def _tol(text: str) -> float:
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {text!r} is not a number") from None
    if not (t > 0 and math.isfinite(t)):
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return t


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_tol, default=DEFAULT_TOL, help="quadrature tolerance (default 1e-9)")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")

    p = _Parser(prog="cycleint", description="Cycle integrals of modular functions along closed geodesics.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pw = sub.add_parser("word", parents=[common], help="inspect an even word expression")
    pw.add_argument("expr", help='quoted word expression, e.g. "(1,1)^n (2,2)"')
    pw.add_argument("-b", "--bind", type=_binding, action="append", default=[], metavar="SYM=INT")

    pe = sub.add_parser("eval", parents=[common], help="compute f(w) for a word or surd")
    pe.add_argument("target", nargs="?", help='word expression or surd literal "(P+sqrt(D))/Q"')
    pe.add_argument("-f", "--function", default="j", help="one, j, j1 or a coefficient file")
    pe.add_argument("-b", "--bind", type=_binding, action="append", default=[], metavar="SYM=INT")
    pe.add_argument("--papcke", type=int, metavar="N", help="use w = (N+sqrt(N^2-4))/2")

    pv = sub.add_parser("verify", parents=[common], help="run randomized invariant suites")
    pv.add_argument("suite", choices=[*verify.SUITES, "all"])
    pv.add_argument("--budget", type=int, default=10, help="cases per suite (default 10)")

    pl = sub.add_parser("limit", parents=[common], help="run a limit experiment from a JSON config")
    pl.add_argument("config", help="experiment config file")
    pl.add_argument("-f", "--function", default=None, help="override the config's function")
    return p


def _expand(expr: str, binds) -> "tuple":
    e = parse_word_expr(expr)
    bindings = dict(binds)
    missing = symbols(e) - bindings.keys()
    if missing:
        raise WordError(f"unbound symbol(s): {', '.join(sorted(missing))} (use -b sym=int)")
    word = expand(e, bindings)
    if not word:
        raise WordError(f"{expr!r} expands to the empty word")
    return word


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else ("" if v is None else v) for k, v in r.items()})
    return buf.getvalue()


def cmd_word(args) -> str:
    word = _expand(args.expr, args.bind)
    g = gamma_of_word(word)
    w = fixed_point(g)
    root, n = primitive_decomposition(word)
    aut = automorph(w)
    eps = aut.epsilon
    report = {
        "word": str(word),
        "length": len(word),
        "gamma": [[str(g.a), str(g.b)], [str(g.c), str(g.d)]],
        "multiplicity": n,
        "root": str(root),
        "surd": str(w),
        "surd_float": to_float(w),
        "conjugate": str(w.conjugate()),
        "conjugate_float": to_float(w.conjugate()),
        "epsilon": str(eps),
        "epsilon_float": float(eps),
        "two_log_epsilon": 2 * math.log(float(eps)) if math.isfinite(float(eps)) else None,
    }
    if args.format == "json":
        return _json(report)
    if args.format == "csv":
        return _csv([{k: json.dumps(v) if isinstance(v, list) else v for k, v in report.items()}])
    gamma = f"[[{g.a},{g.b}],[{g.c},{g.d}]]"
    lines = [f"word: {report['word']}", f"length: {len(word)}", f"gamma: {gamma}",
             f"N: {n}", f"root: {root}", f"surd: {w} = {report['surd_float']!r}",
             f"conjugate: {report['conjugate']} = {report['conjugate_float']!r}",
             f"epsilon: {eps} = {report['epsilon_float']!r}",
             f"2 log epsilon: {report['two_log_epsilon']!r}"]
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> str:
    f = function_from_spec(args.function)
    if args.papcke is not None:
        if args.target is not None:
            raise UsageError("give either a target or --papcke, not both")
        res = value(f, papcke_surd(args.papcke), args.tol)
    elif args.target is None:
        raise UsageError("eval needs a target word, a surd literal or --papcke N")
    elif "sqrt" in args.target:
        res = value(f, QuadraticSurd.parse(args.target), args.tol)
    else:
        res = value_of_word(f, _expand(args.target, args.bind), args.tol)
    row = {"function": f.name, **res.to_json()}
    return _csv([row]) if args.format == "csv" else _json(row)


def cmd_verify(args) -> tuple[str, int]:
    if args.budget < 1:
        raise UsageError("--budget must be >= 1")
    report = verify.run_suite(args.suite, args.seed, args.budget, args.tol)
    if args.format == "csv":
        rows = [{"suite": c["suite"], "check": c["check"], "passed": c["passed"], "cases": c["cases"],
                 "worst_residual": c["worst_residual"], "counterexamples": json.dumps(c["counterexamples"])}
                for c in report["checks"]]
        text = _csv(rows)
    else:
        text = _json(report)
    return text, 0 if report["passed"] else 2


def cmd_limit(args) -> str:
    cfg = lab.load_config(args.config)
    if args.function is not None:
        cfg = lab.TheoremConfig(cfg.v, cfg.w, cfg.schedules, cfg.n_values,
                                function_from_spec(args.function), cfg.tol, args.function)
    if args.tol != DEFAULT_TOL:
        cfg = lab.TheoremConfig(cfg.v, cfg.w, cfg.schedules, cfg.n_values, cfg.f, args.tol, cfg.f_name)
    limit = lab.theorem_limit(cfg)
    rows = lab.run_experiment(cfg, limit)
    meta = {"limit_re": limit.real, "limit_im": limit.imag,
            "decay_exponent": lab.fit_decay_exponent(rows)}
    return lab.format_rows(rows, args.format or "csv", meta)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        status = 0
        if args.command == "word":
            text = cmd_word(args)
        elif args.command == "eval":
            text = cmd_eval(args)
        elif args.command == "verify":
            text, status = cmd_verify(args)
        else:
            text = cmd_limit(args)
    except (UsageError, WordError, ExpansionError, lab.ConfigError) as exc:
        print(f"cycleint: error: {_one_line(exc)}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"cycleint: error: no such file: {exc.filename}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # malformed surd literals, n < 3 and similar input errors
        print(f"cycleint: error: {_one_line(exc)}", file=sys.stderr)
        return 1
    except (QuadratureError, ArithmeticError, OverflowError, OSError, RuntimeError) as exc:
        print(f"cycleint: computation failed: {_one_line(exc)}", file=sys.stderr)
        return 2
    try:
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"cycleint: computation failed: cannot write output: {_one_line(exc)}", file=sys.stderr)
        return 2
    if status:
        print("cycleint: verification failed", file=sys.stderr)
    return status


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or type(exc).__name__


if __name__ == "__main__":
    sys.exit(main())
