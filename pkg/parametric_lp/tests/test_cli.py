"""
Tests for the ``parlp`` command line front end
"""

import os
import sys
myPath = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, myPath + '/../../')

import json

import pytest
from pytest import raises

from parametric_lp.cli import (EXIT_ERROR, EXIT_INFEASIBLE, EXIT_NOT_OPTIMAL,
                               EXIT_OK, EXIT_UNBOUNDED, main)
from parametric_lp.lp.problem import serialize_family
from parametric_lp.utilities import example1_family, rhs_shift_family

EXAMPLE1_N1 = '{"p":["1","0"],"A":[["1","1"]],"b":["1"]}'
EXAMPLE1_LIMIT = '{"p":["0","0"],"A":[["0","1"]],"b":["1"]}'
UNIQUE = '{"p":["2","1"],"A":[["1","1"]],"b":["1"]}'
IDENTITY = '{"p":["1","1"],"A":[["1","0"],["0","1"]],"b":["1","2"]}'
INFEASIBLE = '{"p":["1"],"A":[["1"]],"b":["-1"]}'
UNBOUNDED = '{"p":["1"],"A":[["0"]],"b":["0"]}'


@pytest.fixture
def write(tmp_path):
    def write_file(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write_file


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve(capsys, write):
    code, out, err = run(capsys, ["solve", write("p.json", EXAMPLE1_N1)])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["status"] == "optimal" and document["value"] == "1"
    assert document["optimal_basics"][0]["x"] == ["1", "0"]
    assert out.endswith("\n") and err == ""


def test_solve_exit_codes(capsys, write):
    assert main(["solve", write("i.json", INFEASIBLE)]) == EXIT_INFEASIBLE
    assert json.loads(capsys.readouterr().out)["status"] == "infeasible"
    assert main(["solve", write("u.json", UNBOUNDED)]) == EXIT_UNBOUNDED
    assert json.loads(capsys.readouterr().out)["status"] == "unbounded"


def test_solve_errors(capsys, write):
    code, out, err = run(capsys, ["solve", write("bad.json", '{"p": [')])
    assert code == EXIT_ERROR
    assert out == "" and err.startswith("parlp: error:")
    code, out, err = run(capsys, ["solve", write("bad.json", '{"p":["1"]}')])
    assert code == EXIT_ERROR
    code, out, err = run(capsys, ["solve", "/nonexistent/problem.json"])
    assert code == EXIT_ERROR


def test_solve_respects_enumeration_cap(capsys, write, monkeypatch):
    monkeypatch.setenv("PARLP_ENUM_CAP", "1")
    code, out, err = run(capsys, ["solve", write("p.json", EXAMPLE1_N1)])
    assert code == EXIT_ERROR
    assert "enumeration cap" in err


def test_solve_is_byte_identical(capsys, write):
    path = write("p.json", IDENTITY)
    first = run(capsys, ["solve", path])
    assert run(capsys, ["solve", path]) == first


def test_sensitivity_rhs(capsys, write):
    code, out, err = run(capsys, ["sensitivity", write("p.json", IDENTITY),
                                  "--rhs", write("d.json", '["1","-1"]')])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["interval"] == {"lo": "-1", "hi": "2", "slope": "0",
                                    "base_value": "3", "degenerate": False}
    assert document["basic_point"]["x"] == ["1", "2"]
    assert [row["theta"] for row in document["verification"]] == \
        ["-1", "-1/2", "0", "1", "2"]
    assert all(row["matches"] for row in document["verification"])


def test_sensitivity_objective_with_grid(capsys, write):
    code, out, err = run(capsys, ["sensitivity", write("p.json", UNIQUE),
                                  "--obj", write("d.json", '["0","1"]'),
                                  "--theta-grid", "0,1,2"])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["interval"]["lo"] == "-inf"
    assert document["interval"]["hi"] == "1"
    assert document["interval"]["slope"] == "0"
    last = document["verification"][-1]
    assert last == {"theta": "2", "inside": False, "status": "optimal",
                    "value": "3", "predicted": "2", "matches": False}


def test_sensitivity_degenerate_warns_on_stderr(capsys, write):
    problem = ('{"p":["1","-2","-1","0"],"A":[["1","0","0","0"],'
               '["0","1","1","-1"]],"b":["1","0"]}')
    code, out, err = run(capsys, ["sensitivity", write("p.json", problem),
                                  "--rhs", write("d.json", '["0","-1"]')])
    assert code == EXIT_OK
    assert json.loads(out)["interval"]["degenerate"] is True
    assert "degenerate" in err
    with raises(ValueError):
        json.loads(err)


def test_sensitivity_errors(capsys, write):
    problem = write("p.json", UNIQUE)
    delta = write("d.json", '["1"]')
    with raises(SystemExit) as err:
        main(["sensitivity", problem, "--rhs", delta, "--obj", delta])
    assert err.value.code == EXIT_ERROR
    with raises(SystemExit) as err:
        main(["sensitivity", problem])
    assert err.value.code == EXIT_ERROR
    code, out, _ = run(capsys, ["sensitivity", write("i.json", INFEASIBLE),
                                "--rhs", delta])
    assert code == EXIT_NOT_OPTIMAL and out == ""
    code, _, _ = run(capsys, ["sensitivity", problem,
                              "--rhs", write("z.json", '["0"]')])
    assert code == EXIT_ERROR


def test_classify(capsys, write):
    code, out, _ = run(capsys, ["classify", write("p.json", UNIQUE)])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["regular"] and document["strongly_regular"]
    assert document["singleton_solvable"]

    code, out, _ = run(capsys, ["classify", write("l.json", EXAMPLE1_LIMIT)])
    document = json.loads(out)
    assert not document["regular"]
    assert not document["singleton_solvable"]
    assert not document["bounded_feasible"]

    code, out, _ = run(capsys, ["classify", write("i.json", INFEASIBLE)])
    assert code == EXIT_INFEASIBLE
    assert json.loads(out)["feasible"] is False


def test_probe(capsys, write):
    path = write("f.json", serialize_family(example1_family()))
    code, out, _ = run(capsys, ["probe", path, "--N", "1,10,100"])
    assert code == EXIT_OK
    document = json.loads(out)
    assert [s["gap"] for s in document["samples"]] == ["1", "1", "1"]
    assert document["verdicts"]["value_gap_vanishing"] is False

    path = write("g.json", serialize_family(rhs_shift_family()))
    code, out, _ = run(capsys, ["probe", path])
    assert json.loads(out)["verdicts"]["value_gap_vanishing"] is True

    code, out, _ = run(capsys, ["probe", path, "--N", "1,2", "--csv"])
    assert out.splitlines()[:2] == ["N,V,gap,dist2_S_0,dist2_X_0,dist2_X_1",
                                    "1,4,2,1,1,1"]


def test_probe_not_optimal(capsys, write):
    family = ('{"limit":{"p":["1"],"A":[["1"]],"b":["1"]},'
              '"delta_b":["-2"]}')
    code, out, err = run(capsys, ["probe", write("f.json", family)])
    assert code == EXIT_NOT_OPTIMAL
    assert out == "" and "N=1" in err


def test_probe_rejects_bad_N(write):
    path = write("f.json", serialize_family(example1_family()))
    for bad in ["0,1", "a,b", ""]:
        with raises(SystemExit) as err:
            main(["probe", path, "--N", bad])
        assert err.value.code == EXIT_ERROR


def test_example1(capsys):
    code, out, _ = run(capsys, ["example1", "--N", "1,7"])
    assert code == EXIT_OK
    document = json.loads(out)
    assert document["limit_value"] == "0"
    assert [s["value"] for s in document["samples"]] == ["1", "1"]
    assert document["lsc_S"]["limit_vertices"] == [["0", "1"]]


def test_version_and_usage():
    with raises(SystemExit) as err:
        main(["--version"])
    assert err.value.code == 0
    with raises(SystemExit) as err:
        main([])
    assert err.value.code == EXIT_ERROR
