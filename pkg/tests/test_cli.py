import json

import pytest

from pcnroute.cli import DEFAULT_SEED, main
from pcnroute.ingest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_ingest_fixture(capsys):
    code, out, _ = run(capsys, "ingest", "--snapshot", str(fixture_path("fig5")))
    assert code == 0
    assert out["kept_vertices"] == 13 and out["kept_arcs"] == 24


def test_ingest_errors(capsys, tmp_path):
    code, _, err = run(capsys, "ingest", "--snapshot", str(tmp_path / "nope.json"))
    assert code == 2 and "not found" in err
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "ingest", "--snapshot", str(bad))[0] == 2
    assert run(capsys, "ingest")[0] == 2


def test_plan_fig3(capsys):
    code, out, _ = run(capsys, "plan", "--snapshot", "fixture:fig3", "--source", "s",
                       "--destination", "t", "--amount", "10")
    assert code == 0
    assert out["total_fee"] == pytest.approx(7.6, abs=1e-9)
    assert out["vertices"] == ["s", "i", "t"]


def test_plan_bi_and_no_path(capsys):
    code, out, _ = run(capsys, "plan", "--snapshot", "fixture:fig3", "--source", "s",
                       "--destination", "t", "--amount", "10", "--planner", "bi")
    assert code == 0 and out["total_fee"] == pytest.approx(3)
    code, out, _ = run(capsys, "plan", "--snapshot", "fixture:fig3", "--source", "t",
                       "--destination", "s", "--amount", "10")
    assert code == 0 and out["feasible"] is False


def test_plan_oracle_fig4(capsys):
    code, out, _ = run(capsys, "plan", "--snapshot", "fixture:fig4", "--source", "s",
                       "--destination", "t", "--amount", "100", "--planner", "oracle",
                       "--fee-table", str(fixture_path("fig4_fees")))
    assert code == 0 and out["total_fee"] == 25


@pytest.mark.parametrize("extra", [
    ["--source", "s", "--destination", "zz", "--amount", "10"],
    ["--source", "s", "--destination", "s", "--amount", "10"],
    ["--source", "s", "--destination", "t", "--amount", "0"],
    ["--source", "s", "--destination", "t", "--amount", "10", "--fee-table", "/nonexistent"],
])
def test_plan_input_errors(capsys, extra):
    assert run(capsys, "plan", "--snapshot", "fixture:fig3", *extra)[0] == 2


def test_plan_missing_lookup_is_input_error(capsys):
    code, _, err = run(capsys, "plan", "--snapshot", "fixture:fig4", "--source", "s",
                       "--destination", "t", "--amount", "99",
                       "--fee-table", str(fixture_path("fig4_fees")))
    assert code == 2 and "no tabulated fee" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["plan"])
    assert exc.value.code == 2


def test_simulate_hub_spoke_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        code, out, _ = run(capsys, "simulate", "--snapshot", "fixture:fig5", "--payments", "100",
                           "--seed", "3", "--output-dir", str(d))
        assert code == 0
        assert out["reduction_mean"] > 0 and out["n_payments"] == 100
        outs.append((d / "payments.csv").read_text())
    assert outs[0] == outs[1]


def test_simulate_synthetic_and_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("PCN_SEED", "77")
    a = run(capsys, "simulate", "--synthetic", "200", "--payments", "20")[1]
    b = run(capsys, "simulate", "--synthetic", "200", "--payments", "20", "--seed", "77")[1]
    assert a["uni_mean"] == b["uni_mean"] and a["bi_mean"] == b["bi_mean"]
    monkeypatch.setenv("PCN_SEED", "x")
    assert run(capsys, "simulate", "--synthetic", "200", "--payments", "1")[0] == 2
    assert DEFAULT_SEED == 20240222


def test_simulate_degree_cap_too_strict(capsys):
    code, _, err = run(capsys, "simulate", "--snapshot", "fixture:fig1", "--payments", "1",
                       "--degree-cap", "0")
    assert code == 2 and "eligible" in err


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--synthetic", "200", "--payments", "5",
                       "--repetitions", "1", "--backend", "both")
    assert code == 0 and out["results"]
    for res in out["results"].values():
        assert res["n_payments"] == 5


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--cases", "10")
    assert code == 0 and out["passed"] and not out["failed"]
    gap = next(s for s in out["suites"] if s["name"] == "inconsistent_counterexample")
    assert gap["detail"]["gap"] == 5


def test_verify_zero_cases_warns(capsys):
    code, out, err = run(capsys, "verify", "--cases", "0")
    assert code == 0 and out["passed"] and "warning" in err


def test_verify_failure_exit_1(capsys, monkeypatch):
    from pcnroute import verify
    monkeypatch.setattr(verify, "run_all", lambda *a, **k: [verify.SuiteResult("x", 1, [{"bad": 1}])])
    assert run(capsys, "verify")[0] == 1
