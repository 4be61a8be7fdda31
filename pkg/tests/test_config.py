"""Config schema, defaults, sweep merging, and record serialization."""

import numpy as np
import pytest

from gradkick import (AccuracySpec, ConfigError, DomainBox, ExperimentConfig,
                      FunctionSpec, GridState, ResultRecord,
                      distribution_entries, grid_geometry, run_pipeline,
                      sample_measurements, sample_summary)
from gradkick.config import format_from_dict, format_to_dict
from gradkick.oracle import FixedPointFormat
from gradkick.params import AlgorithmParams


def linear_spec(coeffs=(0.5,)):
    return FunctionSpec(kind="linear", coefficients=tuple(coeffs))


class TestFunctionSpec:
    def test_linear_requires_coefficients(self):
        with pytest.raises(ConfigError, match="coefficients"):
            FunctionSpec(kind="linear")

    def test_linear_rejects_foreign_fields(self):
        with pytest.raises(ConfigError):
            FunctionSpec(kind="linear", coefficients=(1.0,), amplitude=2.0)

    def test_quadratic_requires_square_hessian(self):
        with pytest.raises(ConfigError):
            FunctionSpec(kind="quadratic", coefficients=(1.0, 2.0),
                         hessian=((1.0,),))

    def test_sinusoidal_requires_amplitude_and_frequencies(self):
        spec = FunctionSpec(kind="sinusoidal", amplitude=0.5,
                            frequencies=(1.0, 2.0))
        assert spec.dimension == 2
        with pytest.raises(ConfigError):
            FunctionSpec(kind="sinusoidal", amplitude=0.5)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError, match="kind"):
            FunctionSpec(kind="cubic", coefficients=(1.0,))

    def test_custom_coefficients_picks_model_by_hessian(self):
        box = DomainBox.cube(1, 1.0)
        lin = FunctionSpec(kind="custom-coefficients", coefficients=(2.0,))
        model = lin.build(box)
        assert model.hess_bound == 0.0
        quad = FunctionSpec(kind="custom-coefficients", coefficients=(2.0,),
                            hessian=((1.0,),))
        assert quad.build(box).hess_bound == 1.0

    def test_round_trip(self):
        spec = FunctionSpec(kind="quadratic", coefficients=(1.0, 0.0),
                            hessian=((2.0, 1.0), (1.0, 2.0)))
        assert FunctionSpec.from_dict(spec.to_dict()) == spec


class TestExperimentConfig:
    def test_minimal_dict(self):
        cfg = ExperimentConfig.from_dict({
            "function": {"kind": "linear", "coefficients": [0.5]},
            "x": [0.0],
            "accuracy": {"gamma": 1.0, "delta": 0.5, "epsilon": 0.5},
        })
        assert cfg.shots == 0
        assert cfg.group_mode == "modular"
        assert cfg.phase_variant == "direct"
        assert cfg.prob_floor == 1e-12
        assert cfg.params is None

    def test_requires_accuracy_or_params(self):
        with pytest.raises(ConfigError, match="accuracy or params"):
            ExperimentConfig(function=linear_spec(), x=(0.0,))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ConfigError, match="dimension"):
            ExperimentConfig(function=linear_spec((1.0, 2.0)), x=(0.0,),
                             accuracy=AccuracySpec(1.0, 0.5, 0.5))

    def test_rejects_unknown_keys_everywhere(self):
        base = {
            "function": {"kind": "linear", "coefficients": [0.5]},
            "x": [0.0],
            "accuracy": {"gamma": 1.0, "delta": 0.5, "epsilon": 0.5},
        }
        for poison in (
            {"turbo": True},
            {"function": {**base["function"], "order": 3}},
            {"accuracy": {**base["accuracy"], "sigma": 1.0}},
            {"params": {"n": 2, "nu": 1e-3, "lambda": 1.0, "mu": 0.1,
                        "extra": 0}},
            {"domain": {"center": [0.0], "half_width": [1.0], "shape": "cube"}},
        ):
            with pytest.raises(ConfigError):
                ExperimentConfig.from_dict({**base, **poison})

    def test_rejects_bad_enums_and_ranges(self):
        ok = dict(function=linear_spec(), x=(0.0,),
                  accuracy=AccuracySpec(1.0, 0.5, 0.5))
        with pytest.raises(ConfigError, match="group_mode"):
            ExperimentConfig(**ok, group_mode="additive")
        with pytest.raises(ConfigError, match="phase_variant"):
            ExperimentConfig(**ok, phase_variant="bulk")
        with pytest.raises(ConfigError, match="shots"):
            ExperimentConfig(**ok, shots=-1)
        with pytest.raises(ConfigError, match="prob_floor"):
            ExperimentConfig(**ok, prob_floor=1.0)

    def test_domain_defaults(self):
        acc = ExperimentConfig(function=linear_spec(), x=(0.25,),
                               accuracy=AccuracySpec(2.0, 0.5, 0.5))
        box = acc.resolve_domain()
        assert box.center == (0.25,)
        assert box.half_width == (2.0,)

        params = AlgorithmParams(n=3, nu=1e-9, lam=1.0, mu=0.125)
        explicit = ExperimentConfig(function=linear_spec(), x=(0.25,),
                                    params=params)
        assert explicit.resolve_domain().half_width == (0.5,)

        given = DomainBox.cube(1, 9.0)
        pinned = ExperimentConfig(function=linear_spec(), x=(0.25,),
                                  accuracy=AccuracySpec(2.0, 0.5, 0.5),
                                  domain=given)
        assert pinned.resolve_domain() is given

    def test_explicit_params_win_over_accuracy(self):
        params = AlgorithmParams(n=3, nu=1e-9, lam=1.0, mu=0.125)
        cfg = ExperimentConfig(function=linear_spec(), x=(0.0,),
                               accuracy=AccuracySpec(1.0, 0.5, 0.5),
                               params=params)
        assert cfg.resolve_params(cfg.resolve_model()) is params

    def test_round_trip(self):
        cfg = ExperimentConfig(
            function=linear_spec((0.5, -1.5)), x=(0.1, -0.2),
            accuracy=AccuracySpec(1.0, 0.5, 0.5),
            domain=DomainBox(center=(0.1, -0.2), half_width=(3.0, 4.0)),
            shots=100, seed=7, group_mode="xor", phase_variant="per-bit",
            max_grid_bits=20, prob_floor=1e-9,
            sweep=({"p": 2}, {"seed": 9}))
        assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg

    def test_merged_sweep_entry_overrides(self):
        cfg = ExperimentConfig(function=linear_spec(), x=(0.0,),
                               accuracy=AccuracySpec(1.0, 0.5, 0.5),
                               shots=10, sweep=({"p": 3},))
        merged = cfg.merged({"seed": 5})
        assert merged.seed == 5
        assert merged.shots == 10
        assert merged.sweep == ()

    def test_merged_p_shorthand(self):
        cfg = ExperimentConfig(function=linear_spec(), x=(0.0,),
                               accuracy=AccuracySpec(1.0, 0.5, 0.5),
                               domain=DomainBox.cube(1, 5.0))
        merged = cfg.merged({"p": 3})
        assert merged.function.coefficients == (0.5, 0.5, 0.5)
        assert merged.x == (0.0, 0.0, 0.0)
        assert merged.domain is None
        assert merged.params is None
        with pytest.raises(ConfigError, match="positive"):
            cfg.merged({"p": 0})


def small_run():
    params = AlgorithmParams(n=3, nu=1e-9, lam=1.0, mu=0.125)
    cfg = ExperimentConfig(function=linear_spec((-1.0,)), x=(0.0,),
                           params=params, shots=16, seed=3)
    model = cfg.resolve_model()
    chi, calls = run_pipeline(model, cfg.x, params)
    return cfg, params, chi, calls


def test_distribution_entries_floor_and_order():
    _, params, chi, _ = small_run()
    rows = distribution_entries(chi, params, floor=1e-12)
    assert sum(r["probability"] for r in rows) >= 1.0 - 1e-12 * 8
    gs = [tuple(r["g"]) for r in rows]
    assert gs == sorted(gs)
    everything = distribution_entries(chi, params, floor=0.0)
    top = max(everything, key=lambda r: r["probability"])
    assert top["g"] == [1] and top["gradient"] == [-1.0]
    assert distribution_entries(chi, params, floor=1.0) == []


def test_sample_summary_counts_and_mean():
    _, params, chi, _ = small_run()
    estimates = sample_measurements(chi, 16, seed=3, params=params)
    summary = sample_summary(estimates, 16, 3)
    assert summary["shots"] == 16 and summary["seed"] == 3
    counts = summary["outcome_counts"]
    assert sum(c["count"] for c in counts) == 16
    assert [c["count"] for c in counts] == sorted(
        (c["count"] for c in counts), reverse=True)
    assert summary["mean_gradient"] == [pytest.approx(
        np.mean([e.gradient[0] for e in estimates]))]


def test_grid_geometry():
    params = AlgorithmParams(n=3, nu=1e-9, lam=1.0, mu=0.125)
    bits, size, mem = grid_geometry(params, 2)
    assert (bits, size, mem) == (6, 64, 1024)


def test_format_dict_round_trip():
    fmt = FixedPointFormat(bits=30, a0=-1e-9 * 2.0**29, a1=1e-9,
                           group_mode="xor")
    assert format_from_dict(format_to_dict(fmt)) == fmt


def test_result_record_round_trips_byte_identically():
    cfg, params, chi, calls = small_run()
    model = cfg.resolve_model()
    estimates = sample_measurements(chi, cfg.shots, cfg.seed, params)
    record = ResultRecord(
        command="run",
        config=cfg,
        params=params,
        grid_bits=3,
        grid_size=8,
        memory_estimate_bytes=128,
        format=FixedPointFormat(bits=30, a0=-1e-9 * 2.0**29, a1=1e-9),
        oracle_calls=calls,
        true_gradient=(-1.0,),
        prob_floor=cfg.prob_floor,
        distribution=distribution_entries(chi, params, cfg.prob_floor),
        samples=sample_summary(estimates, cfg.shots, cfg.seed),
    )
    text = record.to_json()
    clone = ResultRecord.from_json(text)
    assert clone.to_json() == text
    assert clone.config == cfg
    assert clone.params == params


def test_result_record_excludes_timings():
    cfg, params, chi, calls = small_run()
    record = ResultRecord(command="run", config=cfg, params=params,
                          grid_bits=3, grid_size=8, memory_estimate_bytes=128,
                          format=None, oracle_calls=calls,
                          true_gradient=(-1.0,), prob_floor=0.0,
                          timings={"pipeline_s": 0.25})
    assert "timings" not in record.to_dict()
    assert "0.25" not in record.to_json()
