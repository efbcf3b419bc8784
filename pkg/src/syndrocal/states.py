"""Input states described only through their Pauli expectation values."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .code import StabilizerCode
from .errors import DimensionError
from .f2kit import F2Function, inverse_walsh
from .pauli import PauliOperator, multiply, symplectic


@dataclass(frozen=True)
class ProductState:
    """Tensor product of single-qubit states given as Bloch vectors.

    Parameters
    ----------
    bloch : tuple of (rx, ry, rz)
        One triple per qubit, qubit 0 first.
    """

    bloch: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(c) for c in r) for r in self.bloch)
        for q, r in enumerate(rows):
            if len(r) != 3:
                raise ValueError(f"qubit {q}: Bloch vector needs 3 components")
            if r[0] ** 2 + r[1] ** 2 + r[2] ** 2 > 1 + 1e-12:
                raise ValueError(f"qubit {q}: Bloch vector {r} lies outside the ball")
        object.__setattr__(self, "bloch", rows)

    @property
    def n(self) -> int:
        return len(self.bloch)

    @classmethod
    def zeros(cls, n: int) -> "ProductState":
        return cls(((0.0, 0.0, 1.0),) * n)


def calibration_state(n: int) -> ProductState:
    """Every qubit pointing along (1, 1, 1)/sqrt(3)."""
    c = 1.0 / math.sqrt(3.0)
    return ProductState(((c, c, c),) * n)


@dataclass(frozen=True)
class CodewordState:
    """Logical computational-basis state of a code.

    ``logical_sign_bits`` bit ``j`` set means logical ``Z_j`` has eigenvalue -1.
    """

    code: StabilizerCode
    logical_sign_bits: int = 0

    def __post_init__(self):
        if len(self.code.logical_z) != self.code.k:
            raise ValueError("code words need k logical Z operators")

    @property
    def n(self) -> int:
        return self.code.n

    def stabilizer_generators(self) -> list[PauliOperator]:
        gens = list(self.code.generators)
        for j, lz in enumerate(self.code.logical_z):
            gens.append(-lz if (self.logical_sign_bits >> j) & 1 else lz)
        return gens


def _phase_value(k: int) -> float:
    if k % 2:
        raise ValueError("expectation requested for a non-Hermitian operator")
    return 1.0 if k % 4 == 0 else -1.0


def _product_expectation(state: ProductState, p: PauliOperator) -> float:
    val = _phase_value(p.phase)
    for q in range((p.x | p.z).bit_length()):
        xb, zb = (p.x >> q) & 1, (p.z >> q) & 1
        if xb or zb:
            rx, ry, rz = state.bloch[q]
            val *= ry if (xb and zb) else (rx if xb else rz)
    return val


def _stabilizer_expectation(gens: list[PauliOperator], p: PauliOperator) -> float:
    n = p.n_qubits
    for g in gens:
        if symplectic(p.x, p.z, g.x, g.z):
            return 0.0
    # eliminate p's symplectic vector against the generators, tracking the product
    rows = [((g.x | (g.z << n)), 1 << i) for i, g in enumerate(gens)]
    pivots: list[tuple[int, int]] = []
    for v, tag in rows:
        for pv, ptag in pivots:
            if v ^ pv < v:
                v, tag = v ^ pv, tag ^ ptag
        if v:
            pivots.append((v, tag))
            pivots.sort(reverse=True)
    target, combo = p.x | (p.z << n), 0
    for pv, ptag in pivots:
        if target ^ pv < target:
            target, combo = target ^ pv, combo ^ ptag
    if target:
        # commutes with everything yet not in the group: a logical
        # not fixed by the state
        return 0.0
    acc = PauliOperator(n)
    for i, g in enumerate(gens):
        if (combo >> i) & 1:
            acc = multiply(acc, g)
    # p = i^(p.phase - acc.phase) * acc
    return _phase_value(p.phase - acc.phase)


def expectation(state, p: PauliOperator) -> float:
    """``tr(p rho)`` for a Hermitian Pauli ``p``."""
    if p.n_qubits != state.n:
        raise DimensionError(f"Pauli on {p.n_qubits} qubits, state on {state.n}")
    if isinstance(state, ProductState):
        return _product_expectation(state, p)
    if isinstance(state, CodewordState):
        return _stabilizer_expectation(state.stabilizer_generators(), p)
    raise TypeError(f"unsupported state type {type(state).__name__}")


def element_expectations(state, code: StabilizerCode) -> np.ndarray:
    """``a -> <S(a)>`` over all ``2**m`` stabilizer elements."""
    return np.array([expectation(state, s) for s in code.elements])


def ideal_syndrome_distribution(state, code: StabilizerCode) -> F2Function:
    """Outcome distribution of an ideal measurement of all generators."""
    spec = F2Function(code.m, element_expectations(state, code))
    return inverse_walsh(spec).require_distribution()


def parse_state(spec: str, code: StabilizerCode):
    """``"codeword"``, ``"calibration"`` or ``"zeros"``."""
    key = spec.strip().lower()
    if key == "codeword":
        return CodewordState(code)
    if key == "calibration":
        return calibration_state(code.n)
    if key == "zeros":
        return ProductState.zeros(code.n)
    raise ValueError(f"unknown state {spec!r}; expected codeword, calibration or zeros")
