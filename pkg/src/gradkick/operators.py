"""Pipeline operators acting on sparse tripartite states.

Each operator returns a new state. The shift and oracle operators are basis
permutations (amplitudes move, never mix), the phase rotation multiplies
amplitudes by unit phases, and the grid transform mixes amplitudes within
each (label, word) sector only, since it acts on the grid register alone.
That sector structure is what lets the final collapse verify factorization
exactly: a broken inverse pair leaves terms in a wrong sector, and no
operator can hide them.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .oracle import (DomainLabel, FixedPointFormat, oracle_value, range_add,
                     range_sub, shift_label, shift_label_inverse)
from .qft import qft_amplitudes
from .states import (GridState, SparseTerm, SparseTripartiteState,
                     grid_index_of, grid_point_of)

if TYPE_CHECKING:
    from .models import FunctionModel
    from .params import AlgorithmParams

PHASE_VARIANTS = ("direct", "per-bit")


class ResidualEntanglementError(RuntimeError):
    """Pipeline output failed to factor as |label> |word> |grid state>."""


@dataclass
class OracleCallCounter:
    """Counts oracle operator applications, not per-term evaluations.

    A superposed evaluation is one oracle invocation; that accounting is the
    whole point of the two-call complexity claim.
    """

    count: int = 0

    def bump(self) -> None:
        self.count += 1


def apply_u_plus(s: SparseTripartiteState, params: AlgorithmParams) -> SparseTripartiteState:
    """Shift operator: label <- c_p(label, g) per term, amplitudes unchanged."""
    terms = tuple(
        SparseTerm(shift_label(t.label, t.grid, params.n), t.word, t.grid, t.amplitude)
        for t in s.terms
    )
    return SparseTripartiteState(n=s.n, p=s.p, terms=terms, normalized=s.normalized)


def apply_u_plus_inverse(s: SparseTripartiteState, params: AlgorithmParams) -> SparseTripartiteState:
    terms = tuple(
        SparseTerm(shift_label_inverse(t.label, t.grid, params.n), t.word, t.grid, t.amplitude)
        for t in s.terms
    )
    return SparseTripartiteState(n=s.n, p=s.p, terms=terms, normalized=s.normalized)


def apply_u_f(s: SparseTripartiteState, model: FunctionModel, fmt: FixedPointFormat,
              params: AlgorithmParams, counter: OracleCallCounter) -> SparseTripartiteState:
    """Oracle operator: word <- word + c_f(label) in the range group."""
    counter.bump()
    terms = tuple(
        SparseTerm(t.label, range_add(fmt, t.word, oracle_value(model, fmt, params, t.label)),
                   t.grid, t.amplitude)
        for t in s.terms
    )
    return SparseTripartiteState(n=s.n, p=s.p, terms=terms, normalized=s.normalized)


def apply_u_f_inverse(s: SparseTripartiteState, model: FunctionModel, fmt: FixedPointFormat,
                      params: AlgorithmParams, counter: OracleCallCounter) -> SparseTripartiteState:
    """Uncomputation of the oracle; costs one oracle call like the forward map."""
    counter.bump()
    terms = tuple(
        SparseTerm(t.label, range_sub(fmt, t.word, oracle_value(model, fmt, params, t.label)),
                   t.grid, t.amplitude)
        for t in s.terms
    )
    return SparseTripartiteState(n=s.n, p=s.p, terms=terms, normalized=s.normalized)


def apply_phase_rotation(s: SparseTripartiteState, lam: float, fmt: FixedPointFormat,
                         variant: str = "direct") -> SparseTripartiteState:
    """Multiply each term by e^(2 pi i lam c_r(word)).

    The per-bit variant routes every set bit k through diag(1, e^(2 pi i lam
    a1 2^k)) instead, exactly what a bank of single-bit phase gates on the
    range register would do. It differs from the direct variant by the global
    phase e^(2 pi i lam a0), since the bits only ever see the a1 part.
    """
    if variant not in PHASE_VARIANTS:
        raise ValueError(f"variant must be one of {PHASE_VARIANTS}")
    out = []
    for t in s.terms:
        if variant == "direct":
            amp = t.amplitude * cmath.exp(2j * cmath.pi * lam * fmt.decode(t.word))
        else:
            amp = t.amplitude
            for k in range(fmt.bits):
                if (t.word >> k) & 1:
                    amp = amp * cmath.exp(2j * cmath.pi * lam * fmt.a1 * float(1 << k))
        out.append(SparseTerm(t.label, t.word, t.grid, amp))
    return SparseTripartiteState(n=s.n, p=s.p, terms=tuple(out), normalized=s.normalized)


def apply_qft(s: SparseTripartiteState, direction: str = "forward") -> SparseTripartiteState:
    """Grid-register transform, applied densely within each (label, word) sector."""
    sectors: dict[tuple[DomainLabel, int], np.ndarray] = {}
    order: list[tuple[DomainLabel, int]] = []
    size = 1 << (s.n * s.p)
    for t in s.terms:
        key = (t.label, t.word)
        if key not in sectors:
            sectors[key] = np.zeros(size, dtype=complex)
            order.append(key)
        sectors[key][grid_index_of(t.grid, s.n, s.p)] = t.amplitude
    terms: list[SparseTerm] = []
    for label, word in order:
        transformed = qft_amplitudes(sectors[(label, word)], s.n, s.p, direction)
        for i in range(size):
            terms.append(SparseTerm(label, word, grid_point_of(i, s.n, s.p),
                                    complex(transformed[i])))
    return SparseTripartiteState(n=s.n, p=s.p, terms=tuple(terms), normalized=s.normalized)


def collapse_to_grid(s: SparseTripartiteState, expected_label: DomainLabel,
                     expected_word: int) -> GridState:
    """Project the pipeline output onto its grid register.

    Every term must already sit in the (expected_label, expected_word)
    sector; the simulation is exact on basis labels, so any term elsewhere,
    however small its amplitude, means an inverse pair is broken.
    """
    for t in s.terms:
        if t.label != expected_label or t.word != expected_word:
            raise ResidualEntanglementError(
                f"term (label={t.label!r}, word={t.word}, grid={t.grid}, "
                f"amplitude={t.amplitude!r}) is outside the expected sector "
                f"(label={expected_label!r}, word={expected_word})"
            )
    amps = np.zeros(1 << (s.n * s.p), dtype=complex)
    for t in s.terms:
        amps[grid_index_of(t.grid, s.n, s.p)] = t.amplitude
    return GridState(n=s.n, p=s.p, amplitudes=amps)
