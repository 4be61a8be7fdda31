"""Fixed-point range encoding and the domain-label algebra.

Range words are unsigned N-bit integers; word w decodes to a0 + a1 * w. The
planner sizes the format so every value the pipeline can produce is within
half a step of a representable value, which is exactly the accuracy the
error analysis charges to arithmetic. Words form a group under modular
addition (two's-complement reading) or XOR; XOR makes the oracle operator
its own inverse.

Domain labels are the basis symbols of the domain register: BASE denotes the
evaluation point x, SHIFTED(g) denotes x + mu * (g - g0) where g0 is the
half-integer grid center. The shift map swaps BASE with SHIFTED(g) and fixes
every other label, which is an involution for each fixed g, so the shift
operator is self-inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .models import FunctionModel
    from .params import AlgorithmParams

MAX_WORD_BITS = 62
GROUP_MODES = ("modular", "xor")


class RangeOverflowError(ValueError):
    """Value outside what the range format can represent; the planner's range_bound was too small."""


class DomainError(ValueError):
    """A represented point left the model's domain box."""


@dataclass(frozen=True)
class FixedPointFormat:
    """N-bit fixed-point encoding: word w decodes to a0 + a1 * w."""

    bits: int
    a0: float
    a1: float
    group_mode: str = "modular"

    def __post_init__(self) -> None:
        if not 1 <= self.bits <= MAX_WORD_BITS:
            raise ValueError(f"bits must be in 1..{MAX_WORD_BITS}, got {self.bits}")
        if not self.a1 > 0:
            raise ValueError("step a1 must be positive")
        if self.group_mode not in GROUP_MODES:
            raise ValueError(f"group_mode must be one of {GROUP_MODES}")

    @property
    def num_words(self) -> int:
        return 1 << self.bits

    @property
    def top(self) -> float:
        """Largest representable value, a0 + a1 * (2^N - 1)."""
        return self.a0 + self.a1 * (self.num_words - 1)

    def decode(self, word: int) -> float:
        _check_word(self, word)
        return self.a0 + self.a1 * word


def _check_word(fmt: FixedPointFormat, word: int) -> None:
    if not 0 <= word < fmt.num_words:
        raise ValueError(f"word {word} does not fit in {fmt.bits} bits")


def plan_format(nu: float, range_bound: float, group_mode: str = "modular") -> FixedPointFormat:
    """Smallest format with step nu whose span covers [-range_bound, range_bound].

    a1 = nu; N is the smallest width with a1 * (2^N - 1) >= 2 * range_bound;
    a0 = -a1 * 2^(N-1). Consequently quantization of any |v| <= range_bound
    lands within nu / 2 of v.
    """
    nu = float(nu)
    range_bound = float(range_bound)
    if not nu > 0:
        raise ValueError("nu must be positive")
    if not range_bound > 0:
        raise ValueError("range_bound must be positive")
    bits = 1
    while nu * ((1 << bits) - 1) < 2.0 * range_bound:
        bits += 1
        if bits > MAX_WORD_BITS:
            raise ValueError(
                f"range format would need more than {MAX_WORD_BITS} bits; "
                "raise nu or shrink range_bound"
            )
    return FixedPointFormat(bits=bits, a0=-nu * float(1 << (bits - 1)), a1=nu,
                            group_mode=group_mode)


def quantize(fmt: FixedPointFormat, v: float) -> int:
    """Word whose decoded value is nearest v, ties to the even word.

    Accepts v up to half a step beyond the representable endpoints (the
    nearest representable value is then the endpoint itself, still within
    a1 / 2); anything further raises RangeOverflowError.
    """
    v = float(v)
    t = (v - fmt.a0) / fmt.a1
    word = round(t)  # banker's rounding on the float quotient
    if word < 0 or word >= fmt.num_words:
        if fmt.a0 - 0.5 * fmt.a1 <= v <= fmt.top + 0.5 * fmt.a1:
            word = min(max(word, 0), fmt.num_words - 1)
        else:
            raise RangeOverflowError(
                f"value {v!r} outside representable range "
                f"[{fmt.a0!r}, {fmt.top!r}] of the {fmt.bits}-bit format"
            )
    return word


def range_add(fmt: FixedPointFormat, r1: int, r2: int) -> int:
    """Group operation on range words; modular addition or XOR per the format."""
    _check_word(fmt, r1)
    _check_word(fmt, r2)
    if fmt.group_mode == "xor":
        return r1 ^ r2
    return (r1 + r2) & (fmt.num_words - 1)


def range_sub(fmt: FixedPointFormat, r1: int, r2: int) -> int:
    """Inverse of range_add in the second argument; in XOR mode the same map."""
    _check_word(fmt, r1)
    _check_word(fmt, r2)
    if fmt.group_mode == "xor":
        return r1 ^ r2
    return (r1 - r2) & (fmt.num_words - 1)


@dataclass(frozen=True)
class DomainLabel:
    """Basis symbol of the domain register.

    shift is None for the BASE label (the evaluation point itself) or the
    grid index g for SHIFTED(g). Labels are values: the uncomputation story
    relies on the inverse shift reproducing a label equal to the original.
    """

    x: tuple[float, ...]
    shift: tuple[int, ...] | None = None

    @classmethod
    def base(cls, x: Sequence[float]) -> DomainLabel:
        return cls(x=tuple(float(v) for v in x), shift=None)

    @classmethod
    def shifted(cls, x: Sequence[float], g: Sequence[int]) -> DomainLabel:
        return cls(x=tuple(float(v) for v in x), shift=tuple(int(v) for v in g))

    @property
    def is_base(self) -> bool:
        return self.shift is None

    @property
    def p(self) -> int:
        return len(self.x)

    def point(self, n: int, mu: float) -> np.ndarray:
        """Represented point: x for BASE, x + mu * (g - g0) for SHIFTED(g)."""
        base = np.asarray(self.x, dtype=float)
        if self.shift is None:
            return base
        g0 = grid_center(n)
        return base + mu * (np.asarray(self.shift, dtype=float) - g0)

    def __repr__(self) -> str:
        tag = "BASE" if self.shift is None else f"SHIFTED{self.shift}"
        return f"DomainLabel(x={self.x}, {tag})"


def grid_center(n: int) -> float:
    """Per-axis grid center g0 = 2^(n-1) - 1/2, symmetric about the base point."""
    return float(1 << (n - 1)) - 0.5


def _check_grid_index(g: Sequence[int], n: int, p: int) -> tuple[int, ...]:
    idx = tuple(int(v) for v in g)
    if len(idx) != p:
        raise ValueError(f"grid index has {len(idx)} axes, expected {p}")
    size = 1 << n
    if any(not 0 <= v < size for v in idx):
        raise ValueError(f"grid index {idx} out of range for n={n}")
    return idx


def shift_label(d: DomainLabel, g: Sequence[int], n: int) -> DomainLabel:
    """The swap construction: BASE <-> SHIFTED(g), all other labels fixed.

    For each fixed g this is an involution, so it is its own inverse, and
    SHIFTED(g) represents x + mu * (g - g0) exactly: the second oracle
    accuracy axiom holds with zero left-hand side.
    """
    idx = _check_grid_index(g, n, d.p)
    if d.shift is None:
        return DomainLabel(x=d.x, shift=idx)
    if d.shift == idx:
        return DomainLabel(x=d.x, shift=None)
    return d


def shift_label_inverse(d: DomainLabel, g: Sequence[int], n: int) -> DomainLabel:
    """Inverse of shift_label; equal to it because the swap is an involution."""
    return shift_label(d, g, n)


def oracle_value(model: FunctionModel, fmt: FixedPointFormat,
                 params: AlgorithmParams, d: DomainLabel) -> int:
    """Range word for f at the labeled point: quantize(evaluate(point(d))).

    Deterministic by construction. Raises DomainError when the represented
    point is outside the model's box and propagates quantization overflow.
    """
    pt = d.point(params.n, params.mu)
    if not model.domain_box.contains(pt):
        raise DomainError(f"represented point {pt.tolist()} outside the domain box")
    return quantize(fmt, model.evaluate(pt))
