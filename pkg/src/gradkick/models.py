"""Black-box objectives with certified derivative bounds.

The estimator treats f as an oracle: only evaluate() ever feeds the pipeline.
gradient() exists for the verification side (reference states, success
windows, finite-difference comparisons); the algorithm itself never calls it.
grad_bound is an infinity-norm bound on the gradient over the domain box and
hess_bound a spectral-norm bound on the Hessian there. The built-in
constructors compute both bounds exactly from the coefficients rather than by
sampling, so the verification checks are meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned box D described by center and per-axis half-width."""

    center: tuple[float, ...]
    half_width: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.center) != len(self.half_width):
            raise ValueError("center and half_width must have equal length")
        if len(self.center) == 0:
            raise ValueError("box must have at least one axis")
        if any(not w > 0 for w in self.half_width):
            raise ValueError("half widths must be positive")

    @property
    def dimension(self) -> int:
        return len(self.center)

    @classmethod
    def cube(cls, p: int, half_width: float,
             center: float | Sequence[float] = 0.0) -> DomainBox:
        if np.ndim(center) == 0:
            mid = (float(center),) * p
        else:
            mid = tuple(float(v) for v in center)
            if len(mid) != p:
                raise ValueError(f"center must have {p} components")
        return cls(center=mid, half_width=(float(half_width),) * p)

    def contains(self, point: Sequence[float]) -> bool:
        pt = np.asarray(point, dtype=float)
        c = np.asarray(self.center)
        w = np.asarray(self.half_width)
        return bool(np.all(np.abs(pt - c) <= w))

    def contains_box(self, point: Sequence[float], radius: float) -> bool:
        """True when the cube point + [-radius, radius]^p lies inside D."""
        pt = np.asarray(point, dtype=float)
        c = np.asarray(self.center)
        w = np.asarray(self.half_width)
        return bool(np.all(np.abs(pt - c) + radius <= w))


@dataclass(frozen=True)
class FunctionModel:
    """Objective f with exact evaluator and verification-only derivatives.

    evaluate and gradient work in float64, the widest native float here.
    """

    p: int
    evaluate: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    grad_bound: float
    hess_bound: float
    domain_box: DomainBox
    name: str = field(default="custom")

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("p must be at least 1")
        if self.domain_box.dimension != self.p:
            raise ValueError("domain box dimension disagrees with p")
        if self.grad_bound < 0 or self.hess_bound < 0:
            raise ValueError("derivative bounds must be nonnegative")


def _as_vector(a: Sequence[float]) -> np.ndarray:
    v = np.asarray(a, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a nonempty 1-d coefficient vector")
    return v


def linear_model(a: Sequence[float], domain_box: DomainBox) -> FunctionModel:
    """f(x) = a . x, gradient constant a, so grad_bound = max|a_m| and hess_bound = 0."""
    coeff = _as_vector(a)
    if domain_box.dimension != coeff.size:
        raise ValueError("domain box dimension disagrees with coefficients")

    def evaluate(x: np.ndarray) -> float:
        return float(np.dot(coeff, np.asarray(x, dtype=float)))

    def gradient(x: np.ndarray) -> np.ndarray:
        return coeff.copy()

    return FunctionModel(
        p=coeff.size,
        evaluate=evaluate,
        gradient=gradient,
        grad_bound=float(np.max(np.abs(coeff))),
        hess_bound=0.0,
        domain_box=domain_box,
        name="linear",
    )


def quadratic_model(a: Sequence[float], hessian: Sequence[Sequence[float]],
                    domain_box: DomainBox) -> FunctionModel:
    """f(x) = a . x + x^T H x / 2 with constant symmetric Hessian H.

    hess_bound is the exact spectral norm of H. grad_bound is the exact
    supremum of |a + H x| (infinity norm) over the box: each component is
    affine in x, so its maximum is |value at center| plus the absolute row
    sums weighted by the half-widths.
    """
    coeff = _as_vector(a)
    H = np.asarray(hessian, dtype=float)
    if H.shape != (coeff.size, coeff.size):
        raise ValueError("hessian shape disagrees with coefficients")
    if not np.array_equal(H, H.T):
        raise ValueError("hessian must be exactly symmetric")
    if domain_box.dimension != coeff.size:
        raise ValueError("domain box dimension disagrees with coefficients")

    def evaluate(x: np.ndarray) -> float:
        v = np.asarray(x, dtype=float)
        return float(np.dot(coeff, v) + 0.5 * np.dot(v, H @ v))

    def gradient(x: np.ndarray) -> np.ndarray:
        return coeff + H @ np.asarray(x, dtype=float)

    center = np.asarray(domain_box.center)
    widths = np.asarray(domain_box.half_width)
    grad_sup = float(np.max(np.abs(coeff + H @ center) + np.abs(H) @ widths))

    return FunctionModel(
        p=coeff.size,
        evaluate=evaluate,
        gradient=gradient,
        grad_bound=grad_sup,
        hess_bound=float(np.linalg.norm(H, 2)),
        domain_box=domain_box,
        name="quadratic",
    )


def sinusoidal_model(c: float, b: Sequence[float], domain_box: DomainBox) -> FunctionModel:
    """f(x) = c sin(b . x).

    gradient = c cos(b . x) b, so |df/dx_m| <= |c||b_m| and grad_bound =
    |c| max|b_m|. The Hessian is -c sin(b . x) b b^T with spectral norm at
    most |c| |b|_2^2, taken as hess_bound.
    """
    freq = _as_vector(b)
    amp = float(c)
    if domain_box.dimension != freq.size:
        raise ValueError("domain box dimension disagrees with coefficients")

    def evaluate(x: np.ndarray) -> float:
        return amp * float(np.sin(np.dot(freq, np.asarray(x, dtype=float))))

    def gradient(x: np.ndarray) -> np.ndarray:
        return amp * float(np.cos(np.dot(freq, np.asarray(x, dtype=float)))) * freq

    return FunctionModel(
        p=freq.size,
        evaluate=evaluate,
        gradient=gradient,
        grad_bound=abs(amp) * float(np.max(np.abs(freq))),
        hess_bound=abs(amp) * float(np.dot(freq, freq)),
        domain_box=domain_box,
        name="sinusoidal",
    )
