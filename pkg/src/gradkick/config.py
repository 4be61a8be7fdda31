"""Experiment configuration and result records.

One canonical tree schema for both input configs and output records, using
the algorithm's own symbol names (n, nu, lambda, mu, gamma, delta, epsilon)
so files stay auditable against the math. Records round-trip losslessly
through JSON; wall-clock timings are kept out of the serialized form so a
rerun with the same config and seed produces byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .algorithm import GradientEstimate, decode_gradient, sampling_radius
from .analysis import (AccuracySpec, InequalityReport, TheoremReport,
                       select_parameters)
from .models import (DomainBox, FunctionModel, linear_model, quadratic_model,
                     sinusoidal_model)
from .oracle import GROUP_MODES, FixedPointFormat
from .operators import PHASE_VARIANTS
from .params import AlgorithmParams
from .states import GridState

DEFAULT_PROB_FLOOR = 1e-12

FUNCTION_KINDS = ("linear", "quadratic", "sinusoidal", "custom-coefficients")


class ConfigError(ValueError):
    """The configuration tree is malformed or inconsistent."""


def _require(payload: dict, key: str, context: str) -> Any:
    if key not in payload:
        raise ConfigError(f"{context}: missing required field {key!r}")
    return payload[key]


def _reject_unknown(payload: dict, allowed: tuple[str, ...], context: str) -> None:
    unknown = sorted(set(payload) - set(allowed))
    if unknown:
        raise ConfigError(f"{context}: unknown field(s) {', '.join(map(repr, unknown))}; "
                          f"allowed: {', '.join(allowed)}")


@dataclass(frozen=True)
class FunctionSpec:
    """Declarative objective: kind plus its coefficient data.

    custom-coefficients is the explicit-coefficients escape hatch: a linear
    form when no hessian is given, a quadratic when one is. The quadratic
    carries its exact Hessian, so the curvature bound M is certified rather
    than estimated.
    """

    kind: str
    coefficients: tuple[float, ...] | None = None
    hessian: tuple[tuple[float, ...], ...] | None = None
    amplitude: float | None = None
    frequencies: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in FUNCTION_KINDS:
            raise ConfigError(f"unknown function kind {self.kind!r}; "
                              f"expected one of {FUNCTION_KINDS}")
        if self.kind == "sinusoidal":
            if self.amplitude is None or self.frequencies is None:
                raise ConfigError("sinusoidal function needs amplitude and frequencies")
            if self.coefficients is not None or self.hessian is not None:
                raise ConfigError("sinusoidal function takes only amplitude "
                                  "and frequencies")
        else:
            if self.amplitude is not None or self.frequencies is not None:
                raise ConfigError(f"{self.kind} function takes no amplitude "
                                  "or frequencies")
            if self.coefficients is None:
                raise ConfigError(f"{self.kind} function needs coefficients")
            if self.kind == "quadratic" and self.hessian is None:
                raise ConfigError("quadratic function needs a hessian")
            if self.kind == "linear" and self.hessian is not None:
                raise ConfigError("linear function takes no hessian")
            if self.hessian is not None:
                k = len(self.coefficients)
                if len(self.hessian) != k or any(len(row) != k for row in self.hessian):
                    raise ConfigError(f"hessian must be {k} x {k}")

    @property
    def dimension(self) -> int:
        if self.kind == "sinusoidal":
            return len(self.frequencies)
        return len(self.coefficients)

    def build(self, box: DomainBox) -> FunctionModel:
        if self.kind == "sinusoidal":
            return sinusoidal_model(self.amplitude, list(self.frequencies), box)
        if self.kind == "quadratic" or (self.kind == "custom-coefficients"
                                        and self.hessian is not None):
            return quadratic_model(list(self.coefficients),
                                   [list(row) for row in self.hessian], box)
        return linear_model(list(self.coefficients), box)

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.coefficients is not None:
            out["coefficients"] = list(self.coefficients)
        if self.hessian is not None:
            out["hessian"] = [list(row) for row in self.hessian]
        if self.amplitude is not None:
            out["amplitude"] = self.amplitude
        if self.frequencies is not None:
            out["frequencies"] = list(self.frequencies)
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> FunctionSpec:
        if not isinstance(payload, dict):
            raise ConfigError("function must be an object")
        _reject_unknown(payload, ("kind", "coefficients", "hessian", "amplitude",
                                  "frequencies"), "function")
        kind = _require(payload, "kind", "function")
        coeffs = payload.get("coefficients")
        hess = payload.get("hessian")
        return cls(
            kind=str(kind),
            coefficients=None if coeffs is None else tuple(float(v) for v in coeffs),
            hessian=None if hess is None else tuple(tuple(float(v) for v in row)
                                                    for row in hess),
            amplitude=(None if payload.get("amplitude") is None
                       else float(payload["amplitude"])),
            frequencies=(None if payload.get("frequencies") is None
                         else tuple(float(v) for v in payload["frequencies"])),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: objective, point, and either accuracy targets or
    explicit parameters.

    Exactly one of accuracy/params drives the parameter choice: explicit
    params always win, with accuracy then serving only as the target the
    checks are scored against. The domain defaults to a cube around x of
    half-width gamma (when accuracy is given) or the sampling radius
    (when only explicit params are).
    """

    function: FunctionSpec
    x: tuple[float, ...]
    accuracy: AccuracySpec | None = None
    params: AlgorithmParams | None = None
    domain: DomainBox | None = None
    shots: int = 0
    seed: int = 0
    group_mode: str = "modular"
    phase_variant: str = "direct"
    max_grid_bits: int | None = None
    prob_floor: float = DEFAULT_PROB_FLOOR
    sweep: tuple[dict, ...] = ()

    def __post_init__(self) -> None:
        if len(self.x) != self.function.dimension:
            raise ConfigError(f"x has {len(self.x)} components but the function "
                              f"has dimension {self.function.dimension}")
        if self.accuracy is None and self.params is None:
            raise ConfigError("one of accuracy or params is required")
        if self.domain is not None and self.domain.dimension != self.function.dimension:
            raise ConfigError("domain dimension does not match the function")
        if self.shots < 0:
            raise ConfigError("shots must be nonnegative")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.group_mode not in GROUP_MODES:
            raise ConfigError(f"group_mode must be one of {GROUP_MODES}")
        if self.phase_variant not in PHASE_VARIANTS:
            raise ConfigError(f"phase_variant must be one of {PHASE_VARIANTS}")
        if self.max_grid_bits is not None and self.max_grid_bits < 1:
            raise ConfigError("max_grid_bits must be positive")
        if not 0.0 <= self.prob_floor < 1.0:
            raise ConfigError("prob_floor must lie in [0, 1)")

    @property
    def dimension(self) -> int:
        return self.function.dimension

    def resolve_domain(self) -> DomainBox:
        """Explicit domain, or the default cube centered at x."""
        if self.domain is not None:
            return self.domain
        if self.accuracy is not None:
            half = self.accuracy.gamma
        else:
            half = sampling_radius(self.params)
        return DomainBox.cube(self.dimension, half, center=tuple(self.x))

    def resolve_model(self) -> FunctionModel:
        return self.function.build(self.resolve_domain())

    def resolve_params(self, model: FunctionModel) -> AlgorithmParams:
        """Explicit params win; otherwise plan from the accuracy targets."""
        if self.params is not None:
            return self.params
        return select_parameters(self.accuracy, model.grad_bound,
                                 model.hess_bound, model.p, self.max_grid_bits)

    def to_dict(self) -> dict:
        return {
            "function": self.function.to_dict(),
            "x": list(self.x),
            "accuracy": None if self.accuracy is None else self.accuracy.to_dict(),
            "params": None if self.params is None else self.params.to_dict(),
            "domain": None if self.domain is None else {
                "center": list(self.domain.center),
                "half_width": list(self.domain.half_width),
            },
            "shots": self.shots,
            "seed": self.seed,
            "group_mode": self.group_mode,
            "phase_variant": self.phase_variant,
            "max_grid_bits": self.max_grid_bits,
            "prob_floor": self.prob_floor,
            "sweep": [dict(entry) for entry in self.sweep],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> ExperimentConfig:
        if not isinstance(payload, dict):
            raise ConfigError("config must be an object")
        _reject_unknown(payload, ("function", "x", "accuracy", "params", "domain",
                                  "shots", "seed", "group_mode", "phase_variant",
                                  "max_grid_bits", "prob_floor", "sweep"), "config")
        function = FunctionSpec.from_dict(_require(payload, "function", "config"))
        x = tuple(float(v) for v in _require(payload, "x", "config"))
        accuracy = payload.get("accuracy")
        params = payload.get("params")
        domain = payload.get("domain")
        if accuracy is not None:
            _reject_unknown(accuracy, ("gamma", "delta", "epsilon"), "accuracy")
            try:
                accuracy = AccuracySpec.from_dict(accuracy)
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"accuracy: {exc}") from exc
        if params is not None:
            _reject_unknown(params, ("n", "nu", "lambda", "mu"), "params")
            try:
                params = AlgorithmParams.from_dict(params)
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"params: {exc}") from exc
        if domain is not None:
            _reject_unknown(domain, ("center", "half_width"), "domain")
            try:
                domain = DomainBox(center=tuple(float(v) for v in domain["center"]),
                                   half_width=tuple(float(v) for v
                                                    in domain["half_width"]))
            except (ValueError, KeyError, TypeError) as exc:
                raise ConfigError(f"domain: {exc}") from exc
        sweep = payload.get("sweep", [])
        if not isinstance(sweep, list) or not all(isinstance(e, dict) for e in sweep):
            raise ConfigError("sweep must be a list of objects")
        try:
            return cls(
                function=function,
                x=x,
                accuracy=accuracy,
                params=params,
                domain=domain,
                shots=int(payload.get("shots", 0)),
                seed=int(payload.get("seed", 0)),
                group_mode=str(payload.get("group_mode", "modular")),
                phase_variant=str(payload.get("phase_variant", "direct")),
                max_grid_bits=(None if payload.get("max_grid_bits") is None
                               else int(payload["max_grid_bits"])),
                prob_floor=float(payload.get("prob_floor", DEFAULT_PROB_FLOOR)),
                sweep=tuple(sweep),
            )
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path: str) -> ExperimentConfig:
        with open(path, "r", encoding="utf-8") as handle:
            try:
                payload = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(payload)

    def merged(self, entry: dict) -> ExperimentConfig:
        """Sweep-entry merge: top-level fields of entry override this config.

        The shorthand {"p": k} expands to a k-dimensional linear objective
        with coefficients 0.5, x at the origin, and no explicit overrides,
        which is what dimension sweeps in benchmarks want.
        """
        base = self.to_dict()
        base["sweep"] = []
        entry = dict(entry)
        if "p" in entry:
            k = int(entry.pop("p"))
            if k < 1:
                raise ConfigError("sweep entry: p must be positive")
            entry.setdefault("function", {"kind": "linear",
                                          "coefficients": [0.5] * k})
            entry.setdefault("x", [0.0] * k)
            entry.setdefault("domain", None)
            entry.setdefault("params", None)
        base.update(entry)
        return ExperimentConfig.from_dict(base)


def format_to_dict(fmt: FixedPointFormat) -> dict:
    return {"bits": fmt.bits, "a0": fmt.a0, "a1": fmt.a1,
            "group_mode": fmt.group_mode}


def format_from_dict(payload: dict) -> FixedPointFormat:
    return FixedPointFormat(bits=int(payload["bits"]), a0=float(payload["a0"]),
                            a1=float(payload["a1"]),
                            group_mode=str(payload["group_mode"]))


def distribution_entries(chi: GridState, params: AlgorithmParams,
                         floor: float) -> list[dict]:
    """Outcome rows above the probability floor, in grid-index order."""
    probs = chi.probabilities()
    rows = []
    for index in np.flatnonzero(probs > floor):
        g = chi.grid_of(int(index))
        rows.append({
            "g": list(g),
            "gradient": [float(v) for v in decode_gradient(g, params)],
            "probability": float(probs[index]),
        })
    return rows


def sample_summary(estimates: Sequence[GradientEstimate], shots: int,
                   seed: int) -> dict:
    """Aggregate sampled estimates: counts per outcome plus the sample mean."""
    counts: dict[tuple[int, ...], int] = {}
    for est in estimates:
        counts[est.g] = counts.get(est.g, 0) + 1
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    mean = np.mean([est.gradient for est in estimates], axis=0)
    return {
        "shots": shots,
        "seed": seed,
        "outcome_counts": [{"g": list(g), "count": c} for g, c in ordered],
        "mean_gradient": [float(v) for v in mean],
    }


@dataclass
class ResultRecord:
    """Everything one command produced, minus wall-clock timings.

    timings stays in memory for display but is excluded from to_dict so the
    serialized record is a pure function of config and seed.
    """

    command: str
    config: ExperimentConfig
    params: AlgorithmParams
    grid_bits: int
    grid_size: int
    memory_estimate_bytes: int
    format: FixedPointFormat | None = None
    oracle_calls: int | None = None
    true_gradient: tuple[float, ...] | None = None
    prob_floor: float | None = None
    distribution: list[dict] | None = None
    samples: dict | None = None
    theorem: TheoremReport | None = None
    inequalities: InequalityReport | None = None
    timings: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config.to_dict(),
            "params": self.params.to_dict(),
            "grid_bits": self.grid_bits,
            "grid_size": self.grid_size,
            "memory_estimate_bytes": self.memory_estimate_bytes,
            "format": None if self.format is None else format_to_dict(self.format),
            "oracle_calls": self.oracle_calls,
            "true_gradient": (None if self.true_gradient is None
                              else list(self.true_gradient)),
            "prob_floor": self.prob_floor,
            "distribution": self.distribution,
            "samples": self.samples,
            "theorem": None if self.theorem is None else self.theorem.to_dict(),
            "inequalities": (None if self.inequalities is None
                             else self.inequalities.to_dict()),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> ResultRecord:
        return cls(
            command=str(payload["command"]),
            config=ExperimentConfig.from_dict(payload["config"]),
            params=AlgorithmParams.from_dict(payload["params"]),
            grid_bits=int(payload["grid_bits"]),
            grid_size=int(payload["grid_size"]),
            memory_estimate_bytes=int(payload["memory_estimate_bytes"]),
            format=(None if payload["format"] is None
                    else format_from_dict(payload["format"])),
            oracle_calls=(None if payload["oracle_calls"] is None
                          else int(payload["oracle_calls"])),
            true_gradient=(None if payload["true_gradient"] is None
                           else tuple(float(v) for v in payload["true_gradient"])),
            prob_floor=(None if payload["prob_floor"] is None
                        else float(payload["prob_floor"])),
            distribution=payload["distribution"],
            samples=payload["samples"],
            theorem=(None if payload["theorem"] is None
                     else TheoremReport.from_dict(payload["theorem"])),
            inequalities=(None if payload["inequalities"] is None
                          else InequalityReport.from_dict(payload["inequalities"])),
        )

    def to_json(self) -> str:
        # allow_nan=False: records must never smuggle inf/nan through JSON.
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> ResultRecord:
        return cls.from_dict(json.loads(text))


def grid_geometry(params: AlgorithmParams, p: int) -> tuple[int, int, int]:
    """(total bits, grid size, bytes for one dense complex sector)."""
    bits = params.n * p
    size = 1 << bits
    return bits, size, size * 16
