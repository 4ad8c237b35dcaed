import csv
import json

import pytest
from hypothesis import given, settings, strategies as st

from pacert.cli import main
from pacert.spine import DomainError, TransitionMatrix
from pacert.sweep import CSV_COLUMNS, SweepConfig


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_build_deterministic(capsys):
    code, a = run(capsys, "build", "--n", "8", "--m", "8")
    _, b = run(capsys, "build", "--n", "8", "--m", "8")
    assert code == 0 and a == b
    assert TransitionMatrix.from_json(a).total() == 58


def test_build_domain_error(capsys):
    code, _ = run(capsys, "build", "--n", "6", "--m", "8")
    assert code == 2


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "--n", "8", "--m", "8", "--bogus"])
    assert exc.value.code == 2


def test_verify_pf(capsys):
    code, out = run(capsys, "verify", "pf", "--count", "20")
    verdict = json.loads(out)
    assert code == 0 and verdict["status"] == "pass" and len(verdict["matrices"]) == 20


def test_verify_locality_bad_length(capsys):
    code, _ = run(capsys, "verify", "locality", "--n", "52", "--l", "0")
    assert code == 2


def test_verify_locality_small(capsys):
    code, out = run(capsys, "verify", "locality", "--n", "26")
    assert code == 0 and json.loads(out)["l"] == 2


def test_verify_conjugation_single(capsys, tmp_path):
    trace = tmp_path / "trace.txt"
    code, out = run(capsys, "verify", "conjugation", "--n", "20", "--m", "20",
                    "--i", "5", "--k", "3", "--trace-out", str(trace))
    assert code == 0 and json.loads(out)["steps"] == 6
    assert trace.read_text().startswith("0. ")


def test_verify_conjugation_out_of_range(capsys, tmp_path):
    code, _ = run(capsys, "verify", "conjugation", "--n", "12", "--i", "9", "--k", "1",
                  "--trace-out", str(tmp_path / "t"))
    assert code == 2


def test_ledger_json(capsys, tmp_path):
    out = tmp_path / "ledger.json"
    assert main(["ledger", "--k-max", "3", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [r["coeff_V8"] for r in data["rows"][:3]] == ["4/1", "4/1", "3/1"]


def test_words(capsys):
    code, out = run(capsys, "words", "--word", "q h@5", "--n", "12", "--m", "12",
                    "--slopes", "a^3 b^5")
    data = json.loads(out)
    assert code == 0 and data["canonical"] == "h@5 q" and data["slopes"] == ["1/5", "1/3"]


def test_sweep_small(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n_start = 30\nn_stop = 36\nk_list = 0,1\nplot = sweep.png\nworkers = 1\n")
    code, out = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0 and "k=1: N_emp=30" in out
    rows = list(csv.reader((tmp_path / "sweep.csv").open()))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 1 + 2 * 3
    assert all(r[CSV_COLUMNS.index("pass")] == "pass" for r in rows[1:])
    summary = json.loads((tmp_path / "sweep_summary.json").read_text())
    assert summary["N_emp"] == {"0": 30, "1": 30}
    assert (tmp_path / "sweep.png").stat().st_size > 0
    first = (tmp_path / "sweep.csv").read_text()
    run(capsys, "sweep", "--config", str(cfg))
    assert (tmp_path / "sweep.csv").read_text() == first


def test_sweep_empty_range(capsys, tmp_path):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("n_start = 40\nn_stop = 30\nworkers = 1\n")
    code, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 0
    assert (tmp_path / "sweep.csv").read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_config_rejects_unknown_key():
    with pytest.raises(DomainError):
        SweepConfig.from_text("colour = red\n")


@settings(max_examples=40)
@given(st.integers(7, 400), st.integers(7, 400), st.integers(1, 9),
       st.lists(st.integers(0, 5), min_size=1, max_size=4, unique=True),
       st.fractions(min_value=0, max_value=1).filter(lambda f: f > 0))
def test_config_round_trip(a, b, step, ks, tol):
    cfg = SweepConfig(n_start=a, n_stop=b, n_step=step, k_list=tuple(ks), tol=tol,
                      H=((1, 2, 3), (0, 1, 0), (4, 4, 4)))
    assert SweepConfig.from_text(cfg.to_text()) == cfg


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda d: st.lists(st.lists(st.integers(0, 9), min_size=d, max_size=d), min_size=d, max_size=d)))
def test_matrix_json_round_trip(rows):
    T = TransitionMatrix.from_dense(rows)
    assert TransitionMatrix.from_json(T.to_json()).to_dense() == rows
