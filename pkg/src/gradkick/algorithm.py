"""The gradient estimator: preparation, seven-operator pipeline, decoding.

One run touches the oracle exactly twice (the oracle operator and its
inverse), independent of the dimension p. The measured grid index decodes to
a gradient estimate on a lattice of spacing 1 / (2^n lam mu) per axis, with
indices at or above 2^(n-1) folded to negative frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .models import FunctionModel
from .oracle import DomainError, DomainLabel, FixedPointFormat, plan_format
from .operators import (OracleCallCounter, apply_phase_rotation, apply_qft,
                        apply_u_f, apply_u_f_inverse, apply_u_plus,
                        apply_u_plus_inverse, collapse_to_grid)
from .params import AlgorithmParams
from .states import GridState, SparseTripartiteState, check_grid_bits

__all__ = [
    "AlgorithmParams",
    "GradientEstimate",
    "axis_decode_values",
    "decode_gradient",
    "plan_run_format",
    "run_pipeline",
    "sample_measurements",
    "sampling_radius",
]


@dataclass(frozen=True)
class GradientEstimate:
    """One measurement outcome: grid index, decoded gradient, model weight."""

    g: tuple[int, ...]
    gradient: tuple[float, ...]
    probability: float


def sampling_radius(params: AlgorithmParams) -> float:
    """Half-width 2^(n-1) mu of the box the grid can reach around x."""
    return float(1 << (params.n - 1)) * params.mu


def decode_gradient(g: Sequence[int], params: AlgorithmParams) -> np.ndarray:
    """Per-axis decoding: -g_m / (2^n lam mu), folding g_m >= 2^(n-1) positive."""
    idx = tuple(int(v) for v in g)
    size = 1 << params.n
    if any(not 0 <= v < size for v in idx):
        raise ValueError(f"grid index {idx} out of range for n={params.n}")
    scale = float(size) * params.lam * params.mu
    half = size >> 1
    return np.array([(-v if v < half else size - v) / scale for v in idx])


def axis_decode_values(params: AlgorithmParams) -> np.ndarray:
    """decode_gradient for every single-axis index, as one array of length 2^n."""
    size = 1 << params.n
    scale = float(size) * params.lam * params.mu
    half = size >> 1
    g = np.arange(size)
    return np.where(g < half, -g / scale, (size - g) / scale)


def plan_run_format(model: FunctionModel, x: Sequence[float], params: AlgorithmParams,
                    group_mode: str = "modular") -> FixedPointFormat:
    """Range format sized from a certified bound on |f| over the sampling box.

    |f(y)| <= |f(x)| + L * |y - x|_1 <= |f(x)| + L * p * 2^(n-1) mu on the
    box, so the planner never needs to evaluate f on the grid. The bound is
    floored at nu to keep it positive for identically-zero objectives.
    """
    pt = np.asarray(x, dtype=float)
    bound = abs(model.evaluate(pt)) + model.grad_bound * model.p * sampling_radius(params)
    return plan_format(nu=params.nu, range_bound=max(bound, params.nu),
                       group_mode=group_mode)


def run_pipeline(model: FunctionModel, x: Sequence[float], params: AlgorithmParams,
                 group_mode: str = "modular", *, phase_variant: str = "direct",
                 max_grid_bits: int | None = None,
                 range_format: FixedPointFormat | None = None) -> tuple[GridState, int]:
    """Execute the estimator and return (grid state chi, oracle call count).

    Prepares |base label> |0> |0...0>, applies grid transform, shift, oracle,
    phase rotation, inverse oracle, inverse shift, grid transform (the same
    positive-kernel transform both times), then collapses onto the grid
    register, verifying the domain and range registers returned to their
    initial basis states.
    """
    pt = np.asarray(x, dtype=float)
    if pt.shape != (model.p,):
        raise ValueError(f"x must have {model.p} components")
    check_grid_bits(params.n, model.p, max_grid_bits)
    radius = sampling_radius(params)
    if not model.domain_box.contains_box(pt, radius):
        raise DomainError(
            f"sampling box of half-width {radius} around {pt.tolist()} exits the domain"
        )
    if range_format is None:
        range_format = plan_run_format(model, pt, params, group_mode)
    elif range_format.group_mode != group_mode:
        raise ValueError("range_format group_mode disagrees with group_mode argument")

    base = DomainLabel.base(pt)
    counter = OracleCallCounter()
    state = SparseTripartiteState.initial(params.n, model.p, base, word=0)
    state = apply_qft(state, "forward")
    state = apply_u_plus(state, params)
    state = apply_u_f(state, model, range_format, params, counter)
    state = apply_phase_rotation(state, params.lam, range_format, variant=phase_variant)
    state = apply_u_f_inverse(state, model, range_format, params, counter)
    state = apply_u_plus_inverse(state, params)
    state = apply_qft(state, "forward")
    chi = collapse_to_grid(state, base, expected_word=0)
    return chi, counter.count


def sample_measurements(chi: GridState, shots: int, seed: int,
                        params: AlgorithmParams) -> list[GradientEstimate]:
    """Draw i.i.d. outcomes from |chi_g|^2 with a seeded generator.

    Inverse-CDF over the row-major outcome order, so identical (chi, shots,
    seed) give identical sequences on any platform with the same generator.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = chi.probabilities()
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"chi is not normalized: probabilities sum to {total!r}")
    cdf = np.cumsum(probs)
    rng = np.random.default_rng(seed)
    draws = rng.random(int(shots))
    indices = np.minimum(np.searchsorted(cdf, draws, side="right"), probs.size - 1)
    out = []
    for i in indices:
        g = chi.grid_of(int(i))
        decoded = decode_gradient(g, params)
        out.append(GradientEstimate(g=g, gradient=tuple(float(v) for v in decoded),
                                    probability=float(probs[i])))
    return out
