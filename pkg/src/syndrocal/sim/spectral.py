"""Exact joint characters by backward (Heisenberg) propagation.

For a query ``(Q, b)`` the engine returns

    Lambda(Q, b) = sum_{e,u} P(e, u) (-1)^(<e, Q> + u.b)

where ``P`` is the circuit's joint distribution of final data error and
outcome flips.  The observable starts as ``Q`` on the data qubits at the end
of the circuit and walks backwards; a measurement whose bit is in ``b``
contributes ``Z`` on its ancilla, every noise site multiplies in its
eigenvalue, and classical flips contribute ``1 - 2q``.  Cost is linear in
circuit length per query, independent of how large the support of ``P`` is.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..code import StabilizerCode
from ..errors import DimensionError
from ..pauli import PauliOperator
from .circuit import NoisyCircuit
from .program import compile_circuit


@dataclass(frozen=True)
class SpectralQuery:
    """Data-qubit observable ``Q`` together with a syndrome-bit mask ``b``."""

    Q: PauliOperator
    b: int = 0


def spectral_coefficients(circuit: NoisyCircuit, qx, qz, qb, backend=None) -> np.ndarray:
    """Vectorized :func:`spectral_coefficient` over arrays of masks."""
    qx = np.ascontiguousarray(qx, dtype=np.uint64).ravel()
    qz = np.ascontiguousarray(qz, dtype=np.uint64).ravel()
    qb = np.ascontiguousarray(qb, dtype=np.uint64).ravel()
    if len(qx) and (np.any((qx | qz) >> np.uint64(circuit.n_data))
                    or np.any(qb >> np.uint64(circuit.m))):
        raise DimensionError("query outside the data qubits or syndrome bits")
    prog = compile_circuit(circuit)
    kern = backend or _kernels.backend
    return np.asarray(kern.backprop(*prog.kernel_backprop_args(), qx, qz, qb), dtype=np.float64)


def spectral_coefficient(circuit: NoisyCircuit, query: SpectralQuery) -> float:
    if query.Q.n_qubits != circuit.n_data:
        raise DimensionError(f"query on {query.Q.n_qubits} qubits, circuit has {circuit.n_data} data qubits")
    return float(spectral_coefficients(circuit, [query.Q.x], [query.Q.z], [query.b])[0])


def gamma_factors(circuit: NoisyCircuit) -> np.ndarray:
    """``a -> Lambda(I, a)``: attenuation of each parity of the outcomes."""
    a = np.arange(1 << circuit.m, dtype=np.uint64)
    zero = np.zeros_like(a)
    return spectral_coefficients(circuit, zero, zero, a)


def beta_factors(circuit: NoisyCircuit, code: StabilizerCode | None = None) -> np.ndarray:
    """``a -> Lambda(S(a), 0)``: attenuation of ``S(a)`` by the data error."""
    code = code or circuit.code
    els = code.elements
    qx = np.array([s.x for s in els], dtype=np.uint64)
    qz = np.array([s.z for s in els], dtype=np.uint64)
    return spectral_coefficients(circuit, qx, qz, np.zeros_like(qx))


def joint_spectrum(circuit: NoisyCircuit, code: StabilizerCode | None = None) -> np.ndarray:
    """``Lambda(S(a), b)`` for all ``a, b``; shape ``(2**m, 2**m)``."""
    code = code or circuit.code
    M = 1 << code.m
    els = code.elements
    qx = np.repeat(np.array([s.x for s in els], dtype=np.uint64), M)
    qz = np.repeat(np.array([s.z for s in els], dtype=np.uint64), M)
    qb = np.tile(np.arange(M, dtype=np.uint64), M)
    return spectral_coefficients(circuit, qx, qz, qb).reshape(M, M)


def fit_exponents(values_by_lambda: np.ndarray, lambdas, base: str = "1-l") -> tuple[np.ndarray, np.ndarray]:
    """Least-squares integer exponent fit of ``values ~ (1 - lam)^k``.

    Returns the rounded exponents and the max absolute residual of each
    column when the rounded exponent is plugged back in.
    """
    lam = np.asarray(lambdas, dtype=float)
    vals = np.asarray(values_by_lambda, dtype=float)
    b = 1.0 - lam if base == "1-l" else 1.0 - 2.0 * lam
    logs = np.log(np.clip(vals, 1e-300, None))
    k = (np.log(b) @ logs) / (np.log(b) @ np.log(b))
    kr = np.rint(k).astype(int)
    resid = np.max(np.abs(vals - b[:, None] ** kr[None, :]), axis=0)
    return kr, resid
