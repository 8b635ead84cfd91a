import csv
import io
import json

import numpy as np
import pytest

from majorlab.cli import main, parse_grid, parse_vector


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sample_csv_rows_sum_to_one(capsys):
    code, out, err = run(capsys, "sample", "--n", "3", "--dist", "uniform", "--count", "2",
                         "--seed", "7")
    assert code == 0 and err == ""
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2
    for row in rows:
        assert len(row) == 3
        assert abs(sum(float(v) for v in row) - 1) <= 1e-9


def test_sample_is_byte_identical_across_runs(capsys):
    a = run(capsys, "sample", "--n", "5", "--count", "20", "--seed", "3")[1]
    b = run(capsys, "sample", "--n", "5", "--count", "20", "--seed", "3")[1]
    assert a == b


def test_sample_values_round_trip(capsys):
    out = run(capsys, "sample", "--n", "4", "--count", "50", "--seed", "1")[1]
    for row in csv.reader(io.StringIO(out)):
        for v in row:
            assert f"{float(v):.17g}" == v


def test_sample_dirichlet_json(capsys):
    code, out, _ = run(capsys, "sample", "--n", "4", "--dist", "dirichlet", "--alpha", "2",
                       "--count", "1", "--seed", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["command"] == "sample"
    assert set(doc) == {"command", "config", "results", "timing_ms", "tool_version"}
    assert doc["config"]["dist"] == {"law": "dirichlet", "alpha": 2.0}
    (vec,) = doc["results"]["vectors"]
    assert len(vec) == 4 and abs(sum(vec) - 1) < 1e-12


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MAJORLAB_SEED", "31")
    a = run(capsys, "sample", "--n", "3", "--count", "3")[1]
    b = run(capsys, "sample", "--n", "3", "--count", "3", "--seed", "31")[1]
    assert a == b
    monkeypatch.setenv("MAJORLAB_SEED", "abc")
    assert run(capsys, "sample", "--n", "3")[0] == 2


def test_sample_validation_errors(capsys):
    assert run(capsys, "sample", "--n", "0")[0] == 2
    assert run(capsys, "sample", "--n", "3", "--dist", "dirichlet")[0] == 2
    assert run(capsys, "sample", "--n", "3", "--dist", "dirichlet", "--alpha", "-1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["sample"])
    assert exc.value.code == 2


def test_check_verdicts(capsys):
    code, out, _ = run(capsys, "check", "--rel", "ut", "--x", "0,0,1", "--y", "0.2,0.5,0.3")
    doc = json.loads(out)
    assert code == 0 and doc["results"]["comparable"] is True
    assert doc["results"]["profiles"]["y"] == pytest.approx([0.2, 0.7, 1.0])
    code, out, _ = run(capsys, "check", "--rel", "maj", "--x", "0.334,0.333,0.333",
                       "--y", "0.5,0.3,0.2")
    assert code == 0
    code, out, _ = run(capsys, "check", "--rel", "ut", "--x", "0.7,0.25,0.05",
                       "--y", "0.0833333333,0.4166666667,0.5")
    assert code == 1 and json.loads(out)["results"]["comparable"] is False


def test_check_sdom_zero_equals_wmaj(capsys):
    pairs = [("0.6,0.3,0.1", "0.5,0.4,0.1"), ("0.2,0.5,0.3", "0.6,0.3,0.1"),
             ("0.4,0.4,0.2", "0.5,0.25,0.25")]
    for x, y in pairs:
        a = run(capsys, "check", "--rel", "sdom", "--s", "0", "--x", x, "--y", y)
        b = run(capsys, "check", "--rel", "wmaj", "--x", x, "--y", y)
        assert a[0] == b[0]
        assert json.loads(a[1])["results"]["comparable"] == json.loads(b[1])["results"]["comparable"]


def test_check_errors(capsys):
    assert run(capsys, "check", "--rel", "ut", "--x", "0,a", "--y", "1,0")[0] == 2
    assert run(capsys, "check", "--rel", "ut", "--x", "0.5,0.5", "--y", "1,0,0")[0] == 2
    assert run(capsys, "check", "--rel", "ut", "--x", "0.5,0.6", "--y", "1,0")[0] == 2
    code, out, err = run(capsys, "check", "--rel", "ut", "--x", "0.5,0.6")
    assert code == 2 and out == "" and "error" in err


def test_check_from_file(capsys, tmp_path):
    f = tmp_path / "pair.csv"
    f.write_text("0,0,1\n0.2,0.5,0.3\n")
    assert run(capsys, "check", "--rel", "ut", "--file", str(f))[0] == 0


def test_vector_normalization():
    v = parse_vector("0.2,0.5,0.3000001")
    assert v.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        parse_vector("0.2,0.5,0.31")


def test_grid_syntax():
    assert parse_grid("0.1:0.9:0.1") == tuple(round(0.1 * i, 12) for i in range(1, 10))
    assert parse_grid("0:1:0.25") == (0.0, 0.25, 0.5, 0.75, 1.0)
    assert parse_grid("0.25,0.5") == (0.25, 0.5)
    with pytest.raises(ValueError):
        parse_grid("1:0:0.1")


def test_pi_command(capsys):
    doc = json.loads(run(capsys, "pi", "--kind", "maj", "--x", "0.8,0.2", "--y", "0.4,0.6")[1])
    assert doc["results"] == {"p_star": 0.75, "argmin_k": 1}
    doc = json.loads(run(capsys, "pi", "--kind", "ut", "--x", "0.7,0.25,0.05",
                         "--y", "0.0833333333,0.4166666667,0.5")[1])
    assert doc["results"]["p_star"] == pytest.approx(5 / 42, abs=1e-9)
    doc = json.loads(run(capsys, "pi", "--kind", "maj", "--x", "0.1,0.6,0.3",
                         "--y", "0.1,0.6,0.3")[1])
    assert doc["results"]["p_star"] == 1.0


def test_exact_command(capsys):
    def value(*args):
        return json.loads(run(capsys, "exact", *args)[1])["results"]["value"]
    assert value("--law", "pcomp", "--n", "5") == 0.2
    assert value("--law", "cdf", "--n", "4", "--t", "0.5") == 0.375
    assert value("--law", "bolshev", "--a", "0.3,0.3") == pytest.approx(0.49, abs=1e-15)
    assert value("--law", "dirbound", "--n", "2", "--alpha", "3", "--t", "0.5") == pytest.approx(5 / 12)
    assert value("--law", "n3a2", "--t", "0.5") == pytest.approx(0.2341269841)
    doc = json.loads(run(capsys, "exact", "--law", "bounds", "--n", "100")[1])
    assert doc["results"]["all_hold"] and len(doc["results"]["rows"]) == 100
    assert run(capsys, "exact", "--law", "cdf", "--n", "4")[0] == 2
    assert run(capsys, "exact", "--law", "bolshev", "--a", "0.5,0.2")[0] == 2


def test_experiment_comp_and_bridge_agree(capsys):
    comp = json.loads(run(capsys, "experiment", "--kind", "comp", "--rel", "ut", "--n", "7",
                          "--samples", "50000", "--seed", "4")[1])
    bridge = json.loads(run(capsys, "experiment", "--kind", "bridge", "--n", "7",
                            "--samples", "50000", "--seed", "4")[1])
    assert comp["results"]["count"] == bridge["results"]["count"]
    assert abs(comp["results"]["z_score"]) < 4


def test_experiment_ecdf_csv(capsys, tmp_path):
    out_file = tmp_path / "ecdf.csv"
    code, out, _ = run(capsys, "experiment", "--kind", "ecdf", "--functional", "piut",
                       "--n", "8", "--grid", "0.1:0.9:0.1", "--samples", "100000",
                       "--seed", "2", "--format", "csv", "--out", str(out_file))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    assert all(abs(float(r["z"])) < 4 for r in rows)
    assert out_file.read_text() == out


def test_experiment_convergence(capsys):
    doc = json.loads(run(capsys, "experiment", "--kind", "convergence", "--n", "4,16",
                         "--eps", "0.3", "--samples", "5000", "--seed", "1")[1])
    assert [r["n"] for r in doc["results"]["rows"]] == [4, 16]


@pytest.mark.parametrize("argv", [
    ["--kind", "comp", "--rel", "maj", "--n", "6"],
    ["--kind", "ecdf", "--functional", "pimaj", "--n", "5", "--grid", "0.2:1:0.2"],
    ["--kind", "bridge", "--n", "4", "--dist", "dirichlet", "--alpha", "0.5"],
    ["--kind", "convergence", "--n", "4,32"],
])
def test_experiment_out_file_independent_of_threads(capsys, tmp_path, argv):
    files = []
    for threads in (1, 4):
        f = tmp_path / f"out{threads}.json"
        code = main(["experiment", *argv, "--samples", "40000", "--seed", "8",
                     "--threads", str(threads), "--out", str(f)])
        capsys.readouterr()
        assert code == 0
        files.append(f.read_bytes())
    assert files[0] == files[1]
    assert b"timing_ms" not in files[0]


def test_experiment_validation(capsys):
    assert run(capsys, "experiment", "--kind", "ecdf", "--n", "3", "--samples", "10")[0] == 2
    assert run(capsys, "experiment", "--kind", "comp", "--n", "3", "--samples", "0")[0] == 2
    assert run(capsys, "experiment", "--kind", "ecdf", "--n", "3", "--grid", "0.5,0.2")[0] == 2
