from __future__ import annotations

import io
import json

import pytest

from cycleint.cycle import value, value_of_word
from cycleint.lab import (
    COLUMNS, MAX_WORD_LENGTH, ConfigError, ExperimentRow, Schedule, TheoremConfig, config_from_dict,
    emit, fit_decay_exponent, format_rows, load_config, papcke_sequence, parse_rows,
    run_experiment, theorem_limit,
)
from cycleint.modular import J, J1, ONE
from cycleint.surds import fixed_point, papcke_surd, periodic_form
from cycleint.words import gamma_of_word


def cfg(v, w, sched=None, n=(2, 4), f=J, tol=1e-9):
    return TheoremConfig(v=v, w=w, schedules=sched or [(1, 0)] * len(w), n_values=n, f=f, tol=tol)


def tilde_pair(word, f=J):
    r = value(f, fixed_point(gamma_of_word(word)))
    return r.f_tilde, r.one_tilde


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            cfg([(), ()], [()])
        with pytest.raises(ConfigError):
            cfg([()], [(1, 1)])
        with pytest.raises(ConfigError):
            Schedule(0, 5)
        with pytest.raises(ConfigError):
            cfg([(), ()], [(1, 1)], n=(0,))
        with pytest.raises(ConfigError):
            cfg([(), ()], [(1, 1)], tol=0)

    def test_word_construction(self):
        c = cfg([(3, 3), (), (4, 4)], [(1, 1), (2, 2)], [(1, 0), (2, -1)])
        assert c.word(2) == (3, 3, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 4, 4)
        assert c.weights() == [1 / 3, 2 / 3]

    def test_empty_word_rejected(self):
        c = cfg([(), ()], [(1, 1)], [(1, -2)], n=(2,))
        with pytest.raises(ConfigError, match="empty"):
            c.word(2)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ConfigError, match="negative"):
            cfg([(), ()], [(1, 1)], [(1, -5)]).word(2)

    def test_guard(self):
        c = cfg([(), ()], [(1, 2)], n=(MAX_WORD_LENGTH,))
        with pytest.raises(ConfigError, match="exceeds"):
            run_experiment(c, limit=0j)

    def test_json_config(self, tmp_path):
        data = {"v": ["()", "(3,3)", "()"], "w": ["(1,1)", "(2,2)^1"], "schedules": [{"c": 1}, {"c": 1, "d": 2}],
                "n_values": [2, 4], "f": "one", "tol": 1e-9}
        p = tmp_path / "c.json"
        p.write_text(json.dumps(data))
        c = load_config(p)
        assert c.f is ONE and c.w[1] == (2, 2) and c.schedules[1] == Schedule(1, 2)
        del data["w"]
        with pytest.raises(ConfigError, match="'w'"):
            config_from_dict(data)
        p.write_text("{not json")
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(p)


class TestLimit:
    def test_single_block_gives_its_value(self):
        c = cfg([(1, 2), (3, 4)], [(2, 3)])
        assert abs(theorem_limit(c) - value(J, fixed_point(gamma_of_word((2, 3)))).value) < 1e-10

    def test_constant_function(self):
        assert abs(theorem_limit(cfg([(), (), ()], [(1, 1), (2, 2)], f=ONE)) - 1) < 1e-12

    def test_two_block_formula(self):
        f1, o1 = tilde_pair((1, 1))
        f2, o2 = tilde_pair((2, 2))
        lim = theorem_limit(cfg([(), (), ()], [(1, 1), (2, 2)]))
        assert abs(lim - (f1 + f2) / (o1 + o2)) < 1e-10

    def test_three_block_formula(self):
        words = [(1, 1), (2, 2), (1, 2, 2, 1)]
        pairs = [tilde_pair(w) for w in words]
        lim = theorem_limit(cfg([()] * 4, words))
        assert abs(lim - sum(p[0] for p in pairs) / sum(p[1] for p in pairs)) < 1e-10

    def test_squared_blocks(self):
        base = cfg([(), (), ()], [(1, 2), (2, 2)], [(1, 0), (3, 0)])
        sq = cfg([(), (), ()], [(1, 2, 1, 2), (2, 2, 2, 2)], [(1, 0), (3, 0)])
        assert abs(theorem_limit(base) - theorem_limit(sq)) < 1e-9

    def test_schedule_scaling(self):
        a = cfg([(), (), ()], [(1, 1), (2, 2)], [(1, 0), (2, 0)])
        b = cfg([(), (), ()], [(1, 1), (2, 2)], [(3, 1), (6, 0)])
        assert abs(theorem_limit(a) - theorem_limit(b)) < 1e-9

    def test_multiplicity_weighting(self):
        # W=(1,1,1,1) counts twice as much as (2,2) at equal schedules
        f1, o1 = tilde_pair((1, 1))
        f2, o2 = tilde_pair((2, 2))
        lim = theorem_limit(cfg([(), (), ()], [(1, 1, 1, 1), (2, 2)]))
        assert abs(lim - (2 * f1 + f2) / (2 * o1 + o2)) < 1e-10


class TestExperiments:
    def test_constant_function_rows(self):
        rows = run_experiment(cfg([(2, 1), (), (3, 3)], [(1, 1), (2, 2)], n=(1, 3, 5), f=ONE))
        assert [r.n for r in rows] == [1, 3, 5]
        for r in rows:
            assert abs(r.value - 1) <= 1e-10 and r.deviation <= 1e-10

    def test_single_block_trend(self):
        rows = run_experiment(cfg([(2, 3), ()], [(1, 1)], n=(2, 4, 8, 16, 32)))
        devs = [r.deviation for r in rows]
        assert all(a > b for a, b in zip(devs, devs[1:]))
        c = max(r.deviation * r.n for r in rows if 4 <= r.n <= 16)
        assert rows[-1].deviation <= 2 * c / rows[-1].n
        assert 0.5 < fit_decay_exponent(rows) < 1.5

    def test_pure_power_is_exact(self):
        # with empty separators the word is W^n itself, whose value is f(w) for every n
        rows = run_experiment(cfg([(), ()], [(1, 1)], n=(2, 4, 8)))
        assert all(r.deviation < 1e-9 for r in rows)

    def test_two_block_trend(self):
        rows = run_experiment(cfg([(), (), ()], [(1, 1), (2, 2)], n=(2, 4, 8)))
        assert rows[-1].deviation < rows[0].deviation
        for r in rows:
            assert r.word_len == 4 * r.n
            assert abs(r.value - value_of_word(J, (1, 1) * r.n + (2, 2) * r.n).value) < 1e-9

    def test_three_block_trend(self):
        rows = run_experiment(cfg([()] * 4, [(1, 1), (2, 2), (1, 2, 2, 1)], n=(2, 8)))
        assert rows[1].deviation < rows[0].deviation


class TestPapcke:
    def test_constant_function(self):
        assert all(abs(v - 1) < 1e-10 for _, v in papcke_sequence(ONE, [3, 7, 12]))

    def test_ordering(self):
        vals = dict(papcke_sequence(J1, [5, 10, 30]))
        assert abs(vals[30]) < abs(vals[10]) < abs(vals[5])

    def test_expansion_shape(self):
        for n in range(4, 12):
            pf = periodic_form(papcke_surd(n))
            assert pf.preperiod == (n - 1,) and pf.period == (1, n - 2)

    def test_rejects_small_n(self):
        with pytest.raises(ValueError):
            papcke_sequence(J1, [2])


ROW = ExperimentRow(3, 12, complex(708.5, -0.25), complex(708.25, 0.0), 0.3535533905932738, 7.5, 1e-12, 12.5)


class TestEmit:
    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            emit([], "csv", io.StringIO())

    def test_one_row_csv(self):
        buf = io.StringIO()
        emit([ROW], "csv", buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 2 and lines[0] == ",".join(COLUMNS)
        assert lines[1].startswith("3,12,708.5,-0.25,708.25,0.0,")

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_round_trip(self, fmt, tmp_path):
        rows = [ROW, ExperimentRow(1, 4, 1 + 0j, 1 + 0j, 0.0, 1.0 / 3.0, 0.0, 0.1)]
        p = tmp_path / f"rows.{fmt}"
        emit(rows, fmt, p, metadata={"limit_re": 708.25, "limit_im": 0.0})
        back = parse_rows(p.read_text(), fmt)
        assert back == sorted(rows, key=lambda r: r.n)

    def test_metadata_header(self):
        text = format_rows([ROW], "csv", {"limit_re": 1.5, "limit_im": -0.0})
        assert text.splitlines()[0] == "# limit_re=1.5"
        doc = json.loads(format_rows([ROW], "json", {"limit_re": 1.5}))
        assert doc["limit_re"] == 1.5 and doc["rows"][0]["n"] == 3

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            format_rows([ROW], "xml")
