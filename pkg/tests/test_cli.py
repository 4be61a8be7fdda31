"""CLI behavior: exit codes, records on disk, determinism, bench table."""

import json

import pytest

from gradkick import ResultRecord, TheoremReport, verify_theorem
from gradkick.cli import main

PLANNED_QUADRATIC = {
    "function": {"kind": "quadratic", "coefficients": [0.0], "hessian": [[1.0]]},
    "x": [0.0],
    "accuracy": {"gamma": 1.0, "delta": 0.5, "epsilon": 0.5},
    "domain": {"center": [0.0], "half_width": [1.0]},
}

EXACT_LINEAR = {
    "function": {"kind": "linear", "coefficients": [-1.0]},
    "x": [0.0],
    "params": {"n": 3, "nu": 1e-9, "lambda": 1.0, "mu": 0.125},
    "domain": {"center": [0.0], "half_width": [1.0]},
    "shots": 12,
    "seed": 5,
}


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_plan_writes_record_and_exits_zero(tmp_path, capsys):
    cfg = write_config(tmp_path, PLANNED_QUADRATIC)
    out = tmp_path / "plan.json"
    assert main(["plan", "--config", cfg, "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "n      = 4" in text
    assert "planning inequalities:" in text
    record = ResultRecord.from_json(out.read_text())
    assert record.command == "plan"
    assert record.params.n == 4
    assert record.inequalities.all_hold


def test_plan_requires_accuracy(tmp_path, capsys):
    cfg = write_config(tmp_path, EXACT_LINEAR)
    assert main(["plan", "--config", cfg]) == 2
    assert "accuracy" in capsys.readouterr().err


def test_plan_with_failing_inequalities_still_exits_zero(tmp_path, capsys):
    payload = dict(PLANNED_QUADRATIC)
    payload["params"] = {"n": 2, "nu": 0.1, "lambda": 1.0, "mu": 0.125}
    cfg = write_config(tmp_path, payload)
    assert main(["plan", "--config", cfg]) == 0
    text = capsys.readouterr().out
    assert "parameters (explicit)" in text
    assert "note: at least one inequality fails" in text


def test_run_records_are_byte_identical(tmp_path, capsys):
    cfg = write_config(tmp_path, EXACT_LINEAR)
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    assert main(["run", "--config", cfg, "--out", str(first)]) == 0
    assert main(["run", "--config", cfg, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    text = capsys.readouterr().out
    assert "2 oracle calls" in text
    assert "true gradient: [-1.0]" in text
    record = ResultRecord.from_json(first.read_text())
    assert record.oracle_calls == 2
    assert record.samples["shots"] == 12
    top = max(record.distribution, key=lambda e: e["probability"])
    assert top["g"] == [1] and top["gradient"] == [-1.0]


def test_run_flag_overrides_reach_the_record(tmp_path):
    cfg = write_config(tmp_path, EXACT_LINEAR)
    out = tmp_path / "run.json"
    assert main(["run", "--config", cfg, "--out", str(out),
                 "--shots", "5", "--seed", "9"]) == 0
    record = ResultRecord.from_json(out.read_text())
    assert record.config.shots == 5
    assert record.config.seed == 9
    assert record.samples["shots"] == 5
    assert sum(c["count"] for c in record.samples["outcome_counts"]) == 5


def test_run_honors_out_dir_env(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, EXACT_LINEAR)
    monkeypatch.setenv("GRADKICK_OUT_DIR", str(tmp_path))
    assert main(["run", "--config", cfg]) == 0
    assert (tmp_path / "run.json").exists()
    explicit = tmp_path / "elsewhere.json"
    assert main(["run", "--config", cfg, "--out", str(explicit)]) == 0
    assert explicit.read_bytes() == (tmp_path / "run.json").read_bytes()


def test_verify_quadratic_passes(tmp_path, capsys):
    cfg = write_config(tmp_path, PLANNED_QUADRATIC)
    out = tmp_path / "verify.json"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "guarantee asserted" in text
    assert "all asserted checks passed" in text
    record = ResultRecord.from_json(out.read_text())
    assert record.theorem.ok
    assert record.theorem.success_probability > 0.99


def test_verify_negative_control_reports_but_exits_zero(tmp_path, capsys):
    payload = dict(PLANNED_QUADRATIC)
    # nu far above plan: precision inequality fails, nothing asserted breaks
    payload["params"] = {"n": 4, "nu": 0.4425020589550919,
                         "lambda": 59.94508570488086,
                         "mu": 0.005560644870446696}
    cfg = write_config(tmp_path, payload)
    assert main(["verify", "--config", cfg]) == 0
    text = capsys.readouterr().out
    assert "guarantee NOT asserted" in text
    assert "all asserted checks passed" in text


def test_verify_record_reproduces_the_report(tmp_path):
    # Re-audit from the echoed config: every float must come back within
    # 1e-10 of the recorded report.
    cfg = write_config(tmp_path, PLANNED_QUADRATIC)
    out = tmp_path / "verify.json"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    record = ResultRecord.from_json(out.read_text())
    again = verify_theorem(record.config.resolve_model(), record.config.x,
                           record.config.accuracy, record.params)
    for name in ("psi_D_norm", "psi_N_norm", "projected_amplitude",
                 "success_probability", "reconstruction_error"):
        assert getattr(again, name) == pytest.approx(
            getattr(record.theorem, name), abs=1e-10)
    assert isinstance(record.theorem, TheoremReport)


def test_missing_config_file_is_usage_error(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_function_kind_is_usage_error(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "function": {"kind": "septic", "coefficients": [1.0]},
        "x": [0.0],
        "accuracy": {"gamma": 1.0, "delta": 0.5, "epsilon": 0.5},
    })
    assert main(["run", "--config", cfg]) == 2
    assert "kind" in capsys.readouterr().err


def test_domain_violation_is_pipeline_failure(tmp_path, capsys):
    payload = dict(EXACT_LINEAR)
    payload["domain"] = {"center": [0.0], "half_width": [0.25]}
    cfg = write_config(tmp_path, payload)
    assert main(["run", "--config", cfg]) == 1
    assert "pipeline failure (DomainError)" in capsys.readouterr().err


def test_grid_guard_trips_as_usage_error(tmp_path, capsys):
    cfg = write_config(tmp_path, PLANNED_QUADRATIC)
    assert main(["plan", "--config", cfg, "--max-grid-bits", "2"]) == 2
    assert "max_grid_bits" in capsys.readouterr().err


def test_bench_counts_scale_with_dimension(tmp_path, capsys):
    payload = {
        "function": {"kind": "linear", "coefficients": [0.5]},
        "x": [0.0],
        "accuracy": {"gamma": 1.0, "delta": 0.5, "epsilon": 0.5},
        "sweep": [{"p": 1}, {"p": 2}, {"p": 3}, {"p": 4}],
    }
    cfg = write_config(tmp_path, payload)
    out = tmp_path / "bench.json"
    assert main(["bench", "--config", cfg, "--out", str(out)]) == 0
    lines = [l for l in capsys.readouterr().out.splitlines()
             if l and not l.startswith("record written")]
    assert lines[0].split("\t") == ["index", "p", "n", "nu", "grid_size",
                                    "quantum_calls", "classical_calls"]
    body = [line.split("\t") for line in lines[1:]]
    assert [row[1] for row in body] == ["1", "2", "3", "4"]
    assert all(row[5] == "2" for row in body)
    assert [row[6] for row in body] == ["2", "3", "4", "5"]
    payload_out = json.loads(out.read_text())
    assert payload_out["command"] == "bench"
    assert [r["classical_oracle_calls"] for r in payload_out["rows"]] == [2, 3, 4, 5]
    assert all(r["quantum_oracle_calls"] == 2 for r in payload_out["rows"])


def test_bench_empty_sweep_prints_header_only(tmp_path, capsys):
    cfg = write_config(tmp_path, PLANNED_QUADRATIC)
    assert main(["bench", "--config", cfg]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["index\tp\tn\tnu\tgrid_size\tquantum_calls\tclassical_calls"]
