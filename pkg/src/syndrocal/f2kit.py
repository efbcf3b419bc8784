"""Linear algebra and harmonic analysis over F_2^m.

Bit words are plain Python integers; bit ``i`` of a word is its ``i``-th
coordinate.  Real-valued functions on F_2^m are stored densely in
:class:`F2Function`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError, DistributionError

MAX_DIM = 16


def dot(a: int, x: int) -> int:
    """F_2 inner product: parity of the AND of two words."""
    return (a & x).bit_count() & 1


def popcount(a: int) -> int:
    return a.bit_count()


def parity_signs(m: int, a: int) -> np.ndarray:
    """The character ``x -> (-1)^(a.x)`` as a length ``2^m`` array."""
    x = np.arange(1 << m, dtype=np.int64)
    bits = np.zeros(1 << m, dtype=np.int64)
    aa = a
    while aa:
        low = aa & -aa
        bits ^= (x & low) != 0
        aa ^= low
    return 1.0 - 2.0 * bits


def _check_dim(m: int) -> None:
    if not 0 <= m <= MAX_DIM:
        raise DimensionError(f"dimension m={m} outside [0, {MAX_DIM}]")


@dataclass(frozen=True, eq=False)
class F2Function:
    """A real function on F_2^m, stored as ``values[x]`` for ``x < 2^m``."""

    m: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_dim(self.m)
        vals = np.array(self.values, dtype=np.float64).reshape(-1)
        if vals.shape[0] != 1 << self.m:
            raise DimensionError(f"expected {1 << self.m} values for m={self.m}, got {vals.shape[0]}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def delta(cls, m: int, at: int = 0, mass: float = 1.0) -> "F2Function":
        v = np.zeros(1 << m)
        v[at] = mass
        return cls(m, v)

    @classmethod
    def uniform(cls, m: int) -> "F2Function":
        return cls(m, np.full(1 << m, 1.0 / (1 << m)))

    def __len__(self) -> int:
        return 1 << self.m

    def __getitem__(self, x):
        return self.values[x]

    def __add__(self, other: "F2Function") -> "F2Function":
        _same_dim(self, other)
        return F2Function(self.m, self.values + other.values)

    def __sub__(self, other: "F2Function") -> "F2Function":
        _same_dim(self, other)
        return F2Function(self.m, self.values - other.values)

    def __mul__(self, other) -> "F2Function":
        if isinstance(other, F2Function):
            _same_dim(self, other)
            return F2Function(self.m, self.values * other.values)
        return F2Function(self.m, self.values * float(other))

    __rmul__ = __mul__

    def total(self) -> float:
        return float(self.values.sum())

    def is_distribution(self, tol: float = 1e-9) -> bool:
        return bool(np.all(self.values >= -tol) and abs(self.total() - 1.0) <= tol)

    def require_distribution(self, tol: float = 1e-9) -> "F2Function":
        """Return self, or raise :class:`DistributionError` if not a distribution."""
        if np.any(self.values < -tol):
            raise DistributionError(f"negative mass {self.values.min():.3g}")
        if abs(self.total() - 1.0) > tol:
            raise DistributionError(f"total mass {self.total():.12g} != 1")
        return self

    def allclose(self, other: "F2Function", atol: float = 1e-12) -> bool:
        return self.m == other.m and bool(np.allclose(self.values, other.values, rtol=0, atol=atol))


def _same_dim(f: F2Function, g: F2Function) -> None:
    if f.m != g.m:
        raise DimensionError(f"dimension mismatch: m={f.m} vs m={g.m}")


def walsh_array(values: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis of a float array."""
    arr = np.array(values, dtype=np.float64, order="C", copy=True)
    lead = arr.shape[:-1]
    flat = arr.reshape(-1, arr.shape[-1])
    _kernels.backend.fwht(flat)
    return flat.reshape(*lead, arr.shape[-1])


def walsh(f: F2Function) -> F2Function:
    """``F[f](x) = sum_a (-1)^(a.x) f(a)`` via the fast butterfly."""
    return F2Function(f.m, walsh_array(f.values))


def inverse_walsh(f: F2Function) -> F2Function:
    return F2Function(f.m, walsh_array(f.values) / (1 << f.m))


def convolve(f: F2Function, g: F2Function) -> F2Function:
    """Group convolution ``(f*g)(a) = sum_b f(b) g(a xor b)``."""
    _same_dim(f, g)
    spec = walsh_array(f.values) * walsh_array(g.values)
    return F2Function(f.m, walsh_array(spec) / (1 << f.m))


# --- subspaces -------------------------------------------------------------


def row_reduce(words: Iterable[int]) -> list[int]:
    """Reduced echelon basis of the span of ``words`` (pivot = highest bit)."""
    basis: list[int] = []
    for w in words:
        for b in basis:
            w = min(w, w ^ b)
        if w:
            basis = [min(b, b ^ w) for b in basis]
            basis.append(w)
            basis.sort(reverse=True)
    return basis


def rank(words: Iterable[int]) -> int:
    return len(row_reduce(words))


@dataclass(frozen=True)
class F2Subspace:
    """Span of linearly independent words in F_2^m."""

    m: int
    basis: tuple[int, ...] = ()

    def __post_init__(self):
        _check_dim(self.m)
        basis = tuple(int(b) for b in self.basis)
        if any(b < 0 or b >> self.m for b in basis):
            raise DimensionError(f"basis word out of range for m={self.m}")
        if rank(basis) != len(basis):
            raise DimensionError("basis words are linearly dependent")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, m: int, words: Sequence[int]) -> "F2Subspace":
        """Subspace spanned by arbitrary (possibly dependent) words."""
        return cls(m, tuple(sorted(row_reduce(words))))

    @classmethod
    def full(cls, m: int) -> "F2Subspace":
        return cls(m, tuple(1 << i for i in range(m)))

    @property
    def k(self) -> int:
        return len(self.basis)

    def members(self) -> list[int]:
        out = [0]
        for b in self.basis:
            out += [w ^ b for w in out]
        return sorted(out)

    def __contains__(self, w: int) -> bool:
        return rank(self.basis + (w,)) == self.k


def cosets(W: F2Subspace) -> list[tuple[int, list[int]]]:
    """All cosets ``u + W`` as (smallest member, sorted members), sorted by representative."""
    members = W.members()
    seen = np.zeros(1 << W.m, dtype=bool)
    out = []
    for u in range(1 << W.m):
        if seen[u]:
            continue
        coset = sorted(u ^ w for w in members)
        seen[coset] = True
        out.append((coset[0], coset))
    return out


def perp(W: F2Subspace) -> F2Subspace:
    """Orthogonal complement under the F_2 dot product."""
    m = W.m
    pivots = {}
    for b in row_reduce(W.basis):
        pivots[b.bit_length() - 1] = b
    free = [i for i in range(m) if i not in pivots]
    out = []
    # one nullspace vector per free coordinate
    for f in free:
        v = 1 << f
        for p, row in pivots.items():
            if dot(row, v):
                v |= 1 << p
        out.append(v)
    return F2Subspace(m, tuple(out))
