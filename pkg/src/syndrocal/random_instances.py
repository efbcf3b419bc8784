"""Random small instances for property checks and the self-test.

Everything takes a ``numpy.random.Generator`` so callers fix the seed.
"""
from __future__ import annotations

import numpy as np

from .channel import JointErrorDistribution, PauliChannel
from .code import StabilizerCode
from .pauli import CliffordGate, PauliOperator, conjugate, symplectic
from .sim.circuit import Flip, Instruction, Noise, NoisyCircuit, build_sequential_extraction
from .states import ProductState

_ONE_QUBIT = ("H", "S")


def random_clifford(n: int, depth: int, rng: np.random.Generator) -> list[CliffordGate]:
    gates = []
    for _ in range(depth):
        if n > 1 and rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(CliffordGate(str(rng.choice(["CNOT", "CZ"])), (int(a), int(b))))
        else:
            gates.append(CliffordGate(str(rng.choice(_ONE_QUBIT)), (int(rng.integers(n)),)))
    return gates


def random_code(n: int, m: int, rng: np.random.Generator, depth: int | None = None) -> StabilizerCode:
    """``Z_0 .. Z_{m-1}`` pushed through a random Clifford, with random signs."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    gates = random_clifford(n, depth if depth is not None else 4 * n, rng)
    gens = []
    for i in range(m):
        p = PauliOperator.single(n, i, "Z")
        for g in gates:
            p = conjugate(g, p)
        if rng.random() < 0.5:
            p = -p
        gens.append(p)
    return StabilizerCode(tuple(gens), name="random")


def random_product_state(n: int, rng: np.random.Generator, pure: bool = False) -> ProductState:
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    if not pure:
        v *= rng.uniform(0.3, 1.0, size=(n, 1))
    return ProductState(tuple(tuple(float(c) for c in row) for row in v))


def random_joint_distribution(n: int, m: int, rng: np.random.Generator,
                              support: int = 6) -> JointErrorDistribution:
    """Random ``P(e, u)``, weighted toward the no-error entry."""
    ex = rng.integers(0, 1 << n, size=support)
    ez = rng.integers(0, 1 << n, size=support)
    u = rng.integers(0, 1 << m, size=support)
    ex[0] = ez[0] = u[0] = 0
    p = rng.random(support)
    p[0] += support / 2
    return JointErrorDistribution(n, m, ex, ez, u, p / p.sum())


def random_centralizer_element(code: StabilizerCode, rng: np.random.Generator) -> PauliOperator:
    """Random Hermitian Pauli commuting with every generator."""
    n = code.n
    while True:
        x, z = int(rng.integers(1 << n)), int(rng.integers(1 << n))
        if not any(symplectic(x, z, g.x, g.z) for g in code.generators):
            return PauliOperator(n, x, z, 2 * int(rng.integers(2)))


def random_pauli_channel(support: tuple[int, ...], rng: np.random.Generator,
                         strength: float = 0.3) -> PauliChannel:
    r = len(support)
    w = rng.random(4 ** r) * strength / (4 ** r)
    w[0] = 1.0 - w[1:].sum()
    probs = {(k & ((1 << r) - 1), k >> r): float(v) for k, v in enumerate(w) if v > 0}
    return PauliChannel(tuple(support), probs)


def random_noisy_circuit(rng: np.random.Generator, max_qubits: int = 8,
                         noise_sites: int = 4) -> NoisyCircuit:
    """Sequential extraction of a random code with random Pauli noise and flips.

    Data plus ancillas stay within ``max_qubits``.
    """
    n = int(rng.integers(2, 5))
    m = int(rng.integers(1, min(n, max_qubits - n) + 1))
    code = random_code(n, m, rng)
    shared = bool(rng.random() < 0.5)
    base = build_sequential_extraction(code, shared_ancilla=shared)
    ins: list[Instruction] = list(base.instructions)
    for _ in range(noise_sites):
        pos = int(rng.integers(0, len(ins) + 1))
        arity = int(rng.integers(1, 3))
        qs = tuple(int(q) for q in rng.choice(base.n_qubits, size=arity, replace=False))
        ins.insert(pos, Noise(random_pauli_channel(qs, rng)))
    for bit in range(m):
        if rng.random() < 0.5:
            ins.append(Flip(bit, float(rng.uniform(0, 0.2))))
    return NoisyCircuit(base.n_qubits, n, m, tuple(ins), code)
