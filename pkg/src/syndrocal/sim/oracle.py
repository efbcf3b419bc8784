"""Brute-force density-matrix reference simulator (test grade, at most 10 qubits).

Only qubits that have been touched are kept in the matrix; untouched ones
are implicitly ``|0>``.  A measurement immediately followed by a reset of
the same qubit is done as project-then-trace-out, which keeps the Steane
parallel circuit at 1024-dimensional matrices for at most eight branches.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence

import numpy as np

from ..channel import JointErrorDistribution
from ..code import StabilizerCode
from ..errors import DimensionError, OracleSizeError
from ..f2kit import F2Function
from ..pauli import PauliOperator
from ..states import CodewordState, ProductState
from .circuit import Flip, Gate, Measure, Noise, NoisyCircuit, Reset

MAX_QUBITS = 10

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_SINGLE = {0: _I, 1: _X, 2: _Z, 3: _Y}  # index x | z << 1

_GATES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "X": _X, "Y": _Y, "Z": _Z,
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


def pauli_matrix(p: PauliOperator) -> np.ndarray:
    """Dense matrix with qubit 0 as the leftmost tensor factor."""
    mats = [_SINGLE[((p.x >> q) & 1) | (((p.z >> q) & 1) << 1)] for q in range(p.n_qubits)]
    out = reduce(np.kron, mats, np.eye(1, dtype=complex))
    return (1j ** p.phase) * out


def projector(generators: Sequence[PauliOperator], x: int) -> np.ndarray:
    """``prod_i (1 + (-1)^x_i S_i) / 2``."""
    n = generators[0].n_qubits
    out = np.eye(1 << n, dtype=complex)
    for i, g in enumerate(generators):
        sign = -1.0 if (x >> i) & 1 else 1.0
        out = out @ (np.eye(1 << n) + sign * pauli_matrix(g)) / 2
    return out


def state_matrix(state) -> np.ndarray:
    if isinstance(state, ProductState):
        mats = [(_I + rx * _X + ry * _Y + rz * _Z) / 2 for rx, ry, rz in state.bloch]
        return reduce(np.kron, mats, np.eye(1, dtype=complex))
    if isinstance(state, CodewordState):
        gens = state.stabilizer_generators()
        rho = projector(gens, 0)
        return rho / np.trace(rho).real
    raise TypeError(f"unsupported state {type(state).__name__}")


def _apply(rho: np.ndarray, U: np.ndarray, pos: Sequence[int]) -> np.ndarray:
    """``U rho U^dagger`` with ``U`` acting on tensor positions ``pos``."""
    k = int(np.log2(rho.shape[0]))
    r = len(pos)
    t = rho.reshape([2] * (2 * k))
    Ut = U.reshape([2] * (2 * r))
    t = np.tensordot(Ut, t, axes=(list(range(r, 2 * r)), list(pos)))
    t = np.moveaxis(t, list(range(r)), list(pos))
    cols = [k + p for p in pos]
    t = np.tensordot(t, Ut.conj(), axes=(cols, list(range(r, 2 * r))))
    t = np.moveaxis(t, list(range(2 * k - r, 2 * k)), cols)
    return t.reshape(rho.shape)


def _select(rho: np.ndarray, pos: int, outcome: int, keep: bool) -> np.ndarray:
    """Project qubit at ``pos`` on ``|outcome>``; drop it from the matrix unless ``keep``."""
    k = int(np.log2(rho.shape[0]))
    t = rho.reshape([2] * (2 * k))
    idx = [slice(None)] * (2 * k)
    if keep:
        out = np.zeros_like(t)
        idx[pos] = idx[k + pos] = outcome
        out[tuple(idx)] = t[tuple(idx)]
        return out.reshape(rho.shape)
    idx[pos] = idx[k + pos] = outcome
    sub = t[tuple(idx)]
    d = 1 << (k - 1)
    return sub.reshape(d, d)


def _trace_out(rho: np.ndarray, pos: int) -> np.ndarray:
    return _select(rho, pos, 0, False) + _select(rho, pos, 1, False)


@dataclass
class OracleResult:
    """Outcome distribution and normalized post-measurement data states."""

    m: int
    n_data: int
    branches: dict  # word -> (probability, data density matrix)

    @property
    def outcomes(self) -> F2Function:
        v = np.zeros(1 << self.m)
        for w, (p, _) in self.branches.items():
            v[w] = p
        return F2Function(self.m, v)

    def expectation(self, word: int, p: PauliOperator) -> float:
        prob, rho = self.branches[word]
        return float(np.real(np.trace(pauli_matrix(p) @ rho)))

    def average_state(self) -> np.ndarray:
        return sum(p * r for p, r in self.branches.values())

    def post_expectations(self, code: StabilizerCode) -> dict[int, np.ndarray]:
        """``word -> [<S(a)> for a]`` on each post-measurement state."""
        mats = [pauli_matrix(s) for s in code.elements]
        return {w: np.array([np.real(np.trace(M @ r)) for M in mats])
                for w, (_, r) in self.branches.items()}


def density_oracle(circuit: NoisyCircuit, state, rho: np.ndarray | None = None) -> OracleResult:
    """Exact evolution of ``state`` on the data qubits through ``circuit``."""
    if circuit.n_qubits > MAX_QUBITS:
        raise OracleSizeError(f"{circuit.n_qubits} qubits exceed the oracle limit of {MAX_QUBITS}")
    n = circuit.n_data
    if rho is None:
        if state.n != n:
            raise DimensionError("state size differs from the data qubits")
        rho = state_matrix(state)
    active = list(range(n))
    branches: dict[int, np.ndarray] = {0: np.asarray(rho, dtype=complex)}

    def activate(qs):
        for q in qs:
            if q not in active:
                active.append(q)
                for w in branches:
                    branches[w] = np.kron(branches[w], np.array([[1, 0], [0, 0]], dtype=complex))

    ins = circuit.instructions
    i = 0
    while i < len(ins):
        op = ins[i]
        if isinstance(op, Gate):
            activate(op.qubits)
            pos = [active.index(q) for q in op.qubits]
            U = _GATES[op.gate.kind]
            for w in branches:
                branches[w] = _apply(branches[w], U, pos)
        elif isinstance(op, Noise):
            activate(op.channel.support)
            pos = [active.index(q) for q in op.channel.support]
            r = op.channel.arity
            for w in branches:
                acc = np.zeros_like(branches[w])
                for (lx, lz), pr in op.channel.probs.items():
                    acc += pr * _apply(branches[w], pauli_matrix(PauliOperator(r, lx, lz)), pos)
                branches[w] = acc
        elif isinstance(op, Measure):
            fused = i + 1 < len(ins) and isinstance(ins[i + 1], Reset) and ins[i + 1].qubit == op.qubit
            if op.qubit not in active:
                pass  # |0>: outcome 0, nothing changes
            else:
                pos = active.index(op.qubit)
                new: dict[int, np.ndarray] = {}
                for w, r in branches.items():
                    for o in (0, 1):
                        part = _select(r, pos, o, keep=not fused)
                        if np.real(np.trace(part)) > 1e-15:
                            key = w | (o << op.bit)
                            new[key] = new.get(key, 0) + part
                if fused:
                    active.remove(op.qubit)
                branches = new
            if fused:
                i += 1
        elif isinstance(op, Reset):
            if op.qubit in active:
                pos = active.index(op.qubit)
                for w in branches:
                    branches[w] = _trace_out(branches[w], pos)
                active.remove(op.qubit)
        elif isinstance(op, Flip):
            bit = 1 << op.bit
            new = {}
            for w, r in branches.items():
                for key, wt in ((w, 1 - op.q), (w ^ bit, op.q)):
                    if wt > 0:
                        new[key] = new.get(key, 0) + wt * r
            branches = new
        i += 1

    out = {}
    for w, r in branches.items():
        # trace out ancillas, then order data qubits 0..n-1
        for q in sorted((q for q in active if q >= n), key=active.index, reverse=True):
            r = _trace_out(r, active.index(q))
        data_active = [q for q in active if q < n]
        missing = [q for q in range(n) if q not in data_active]
        for q in missing:
            r = np.kron(r, np.array([[1, 0], [0, 0]], dtype=complex))
            data_active.append(q)
        perm = [data_active.index(q) for q in range(n)]
        t = r.reshape([2] * (2 * n)).transpose(perm + [n + p for p in perm])
        r = t.reshape(1 << n, 1 << n)
        prob = float(np.real(np.trace(r)))
        if prob > 1e-15:
            out[w] = (prob, r / prob)
    # remove ancilla bookkeeping from `active` for a clean state
    return OracleResult(circuit.m, n, out)


def faulty_measure(P: JointErrorDistribution, generators: Sequence[PauliOperator],
                   rho: np.ndarray) -> dict[int, np.ndarray]:
    """Apply the Kraus instrument of a faulty measurement.

    Returns unnormalized post-measurement states keyed by recorded word:
    ``w -> sum_{e,u} P(e,u) e pi_{w+u} rho pi_{w+u} e``.
    """
    if len(generators) != P.m or any(g.n_qubits != P.n for g in generators):
        raise DimensionError("generators do not match the distribution")
    M = 1 << P.m
    proj = [projector(generators, x) for x in range(M)]
    sandw = [pr @ rho @ pr for pr in proj]
    out: dict[int, np.ndarray] = {}
    for ex, ez, u, p in zip(P.ex, P.ez, P.u, P.p):
        E = pauli_matrix(PauliOperator(P.n, int(ex), int(ez)))
        for x in range(M):
            w = x ^ int(u)
            term = p * (E @ sandw[x] @ E.conj().T)
            out[w] = out.get(w, 0) + term
    return out


def faulty_sequence(steps: Sequence[tuple[JointErrorDistribution, Sequence[PauliOperator]]],
                    rho: np.ndarray) -> dict[int, np.ndarray]:
    """Several faulty measurements in a row; words concatenate low bits first."""
    branches = {0: rho}
    shift = 0
    for P, gens in steps:
        new: dict[int, np.ndarray] = {}
        for w, r in branches.items():
            for v, s in faulty_measure(P, gens, r).items():
                key = w | (v << shift)
                new[key] = new.get(key, 0) + s
        branches = new
        shift += P.m
    return branches


def word_distribution(branches: Mapping[int, np.ndarray], bits: int) -> np.ndarray:
    v = np.zeros(1 << bits)
    for w, r in branches.items():
        v[w] += np.real(np.trace(r))
    return v
