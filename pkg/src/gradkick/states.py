"""State containers: dense grid amplitudes and sparse tripartite terms.

The grid register is dense (complex array over {0,...,2^n-1}^p in row-major
order). The full tripartite system is not: a dense vector over domain labels,
range words and grid indices would be astronomically large, while the
pipeline never populates more than 2^(pn) basis terms. Sparse terms make the
uncomputation claim checkable exactly instead of assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .oracle import DomainLabel

# 2^26 complex amplitudes is about 1 GiB; refuse anything larger unless the
# caller overrides the guard explicitly.
DEFAULT_MAX_GRID_BITS = 26

NORM_TOL = 1e-12


class GridSizeError(ValueError):
    """Grid would exceed the dense-memory guard."""


def check_grid_bits(n: int, p: int, max_grid_bits: int | None = None) -> None:
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    limit = DEFAULT_MAX_GRID_BITS if max_grid_bits is None else int(max_grid_bits)
    if n * p > limit:
        raise GridSizeError(
            f"grid needs {n * p} bits ({p} axes of {n} bits), over the "
            f"{limit}-bit guard; pass a larger max_grid_bits to override"
        )


def grid_index_of(g: Sequence[int], n: int, p: int) -> int:
    """Flat row-major index of a grid point; first axis varies slowest."""
    idx = tuple(int(v) for v in g)
    if len(idx) != p:
        raise ValueError(f"grid index has {len(idx)} axes, expected {p}")
    size = 1 << n
    out = 0
    for v in idx:
        if not 0 <= v < size:
            raise ValueError(f"grid index {idx} out of range for n={n}")
        out = (out << n) | v
    return out


def grid_point_of(index: int, n: int, p: int) -> tuple[int, ...]:
    """Inverse of grid_index_of."""
    if not 0 <= index < (1 << (n * p)):
        raise ValueError(f"flat index {index} out of range")
    mask = (1 << n) - 1
    return tuple((index >> (n * (p - 1 - axis))) & mask for axis in range(p))


@dataclass(eq=False)
class GridState:
    """Normalized amplitudes over the grid register.

    Index i encodes (g_1, ..., g_p) in row-major order: the first axis varies
    slowest. Construction rejects unnormalized input because every producer
    in this package is unitary; pass normalized=False only for deliberately
    partial states.
    """

    n: int
    p: int
    amplitudes: np.ndarray
    normalized: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        # The memory guard lives at the allocation entry points (basis
        # construction, the pipeline); here only shape sanity is enforced.
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << (self.n * self.p),):
            raise ValueError(
                f"expected {1 << (self.n * self.p)} amplitudes, got shape {amps.shape}"
            )
        self.amplitudes = amps
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()!r} is not 1 within {NORM_TOL}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (1 << self.n,) * self.p

    @property
    def size(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def index_of(self, g: Sequence[int]) -> int:
        return grid_index_of(g, self.n, self.p)

    def grid_of(self, index: int) -> tuple[int, ...]:
        return grid_point_of(index, self.n, self.p)

    @classmethod
    def basis(cls, n: int, p: int, g: Sequence[int],
              max_grid_bits: int | None = None) -> GridState:
        check_grid_bits(n, p, max_grid_bits)
        amps = np.zeros(1 << (n * p), dtype=complex)
        state = cls(n=n, p=p, amplitudes=amps, normalized=False)
        amps[state.index_of(g)] = 1.0
        return cls(n=n, p=p, amplitudes=amps)


class SparseTerm(NamedTuple):
    """One basis term (domain label, range word, grid index, amplitude)."""

    label: DomainLabel
    word: int
    grid: tuple[int, ...]
    amplitude: complex


@dataclass(eq=False)
class SparseTripartiteState:
    """Finite superposition over distinct (label, word, grid) basis triples."""

    n: int
    p: int
    terms: tuple[SparseTerm, ...]
    normalized: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        seen: set[tuple] = set()
        size = 1 << self.n
        for term in self.terms:
            key = (term.label, term.word, term.grid)
            if key in seen:
                raise ValueError(f"duplicate basis triple {key[:3]}")
            seen.add(key)
            if len(term.grid) != self.p or any(not 0 <= v < size for v in term.grid):
                raise ValueError(f"grid index {term.grid} out of range for n={self.n}")
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {self.norm()!r} is not 1 within {NORM_TOL}")

    def norm(self) -> float:
        return math.sqrt(sum(abs(t.amplitude) ** 2 for t in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterable[SparseTerm]:
        return iter(self.terms)

    @classmethod
    def initial(cls, n: int, p: int, label: DomainLabel, word: int = 0) -> SparseTripartiteState:
        """Preparation state |label> |word> |0...0> with unit amplitude."""
        term = SparseTerm(label=label, word=int(word), grid=(0,) * p, amplitude=1.0 + 0.0j)
        return cls(n=n, p=p, terms=(term,))
