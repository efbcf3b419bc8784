import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from syndrocal.code import steane
from syndrocal.errors import DimensionError
from syndrocal.pauli import (CliffordGate, PauliOperator, conjugate, multiply, pairing, syndrome_of,
                             weight)
from syndrocal.sim.oracle import pauli_matrix

P = PauliOperator.from_string


def paulis(n_max=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1),
                            st.integers(0, 3)).map(lambda t: PauliOperator(n, *t)))


def pauli_pairs(n_max=6):
    def build(n):
        one = st.tuples(st.integers(0, (1 << n) - 1), st.integers(0, (1 << n) - 1), st.integers(0, 3))
        return st.tuples(one, one).map(lambda t: (PauliOperator(n, *t[0]), PauliOperator(n, *t[1])))
    return st.integers(1, n_max).flatmap(build)


def test_pairing_examples():
    assert pairing(P("X"), P("Z")) == 1
    assert pairing(P("X"), P("X")) == 0
    assert pairing(P("XZ"), P("ZX")) == 0
    with pytest.raises(DimensionError):
        pairing(P("X"), P("XX"))


def test_multiply_examples():
    assert multiply(P("X"), P("Z")) == P("-iY")
    assert multiply(P("IIIXXXX"), P("IIIZZZZ")) == P("+IIIYYYY")


def test_single_qubit_phase_table():
    # matrices are the independent reference
    for a in "IXYZ":
        for b in "IXYZ":
            prod = multiply(P(a), P(b))
            assert np.allclose(pauli_matrix(prod), pauli_matrix(P(a)) @ pauli_matrix(P(b)))


@given(pauli_pairs(4))
def test_multiply_matches_matrices(pq):
    p, q = pq
    assert np.allclose(pauli_matrix(multiply(p, q)), pauli_matrix(p) @ pauli_matrix(q))


@given(paulis())
def test_square_is_signed_identity(p):
    sq = multiply(p, p)
    assert sq.x == 0 and sq.z == 0 and sq.phase in (0, 2)
    if p.is_hermitian:
        assert sq.phase == 0


@given(pauli_pairs())
def test_pairing_symmetric_and_matches_commutation(pq):
    p, q = pq
    assert pairing(p, q) == pairing(q, p)
    assert pairing(p, p) == 0
    pq_, qp = multiply(p, q), multiply(q, p)
    assert (pq_.phase != qp.phase) == bool(pairing(p, q))


def test_weight_examples():
    assert weight(PauliOperator.identity(3)) == 0
    assert weight(P("IIIYYYY")) == 4
    assert weight(multiply(P("X"), P("Z"))) == 1


def test_conjugation_rules():
    H0 = CliffordGate("H", (0,))
    assert conjugate(H0, P("X")) == P("Z")
    cx = CliffordGate("CNOT", (0, 1))
    assert conjugate(cx, P("XI")) == P("XX")
    assert conjugate(cx, P("IZ")) == P("ZZ")
    assert conjugate(cx, P("ZI")) == P("ZI")
    assert conjugate(cx, P("IX")) == P("IX")
    assert conjugate(CliffordGate("CZ", (0, 1)), P("XI")) == P("XZ")


GATE_MATS = {
    "H": np.array([[1, 1], [1, -1]]) / np.sqrt(2),
    "S": np.diag([1, 1j]),
    "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    "CZ": np.diag([1, 1, 1, -1]),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
}


def gate_matrix(g, n):
    """Embed a gate on qubits ``g.qubits`` of an n-qubit register, qubit 0 leftmost."""
    U = GATE_MATS[g.kind].astype(complex)
    k = len(g.qubits)
    rest = [q for q in range(n) if q not in g.qubits]
    full = np.kron(U, np.eye(1 << (n - k)))
    order = list(g.qubits) + rest
    perm = [order.index(q) for q in range(n)]
    t = full.reshape([2] * (2 * n)).transpose(perm + [n + p for p in perm])
    return t.reshape(1 << n, 1 << n)


@given(st.data())
def test_conjugate_matches_matrices(data):
    n = data.draw(st.integers(2, 3))
    kind = data.draw(st.sampled_from(sorted(GATE_MATS)))
    arity = 2 if kind in ("CNOT", "CZ", "SWAP") else 1
    qs = data.draw(st.permutations(range(n)))[:arity]
    g = CliffordGate(kind, tuple(qs))
    p = PauliOperator(n, data.draw(st.integers(0, (1 << n) - 1)), data.draw(st.integers(0, (1 << n) - 1)))
    U = gate_matrix(g, n)
    assert np.allclose(pauli_matrix(conjugate(g, p)), U @ pauli_matrix(p) @ U.conj().T)


def test_conjugate_preserves_pairing_random(rng):
    kinds = ["H", "S", "X", "Y", "Z", "CNOT", "CZ", "SWAP"]
    for _ in range(10_000):
        n = int(rng.integers(2, 9))
        kind = kinds[int(rng.integers(len(kinds)))]
        arity = 2 if kind in ("CNOT", "CZ", "SWAP") else 1
        g = CliffordGate(kind, tuple(int(q) for q in rng.choice(n, size=arity, replace=False)))
        p = PauliOperator(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)))
        q = PauliOperator(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)))
        assert pairing(p, q) == pairing(conjugate(g, p), conjugate(g, q))


def test_conjugate_rejects_out_of_range():
    with pytest.raises(DimensionError):
        conjugate(CliffordGate("H", (3,)), P("XX"))


def test_string_round_trip():
    for s in ("+IIIXXXX", "-XYZ", "+iZ", "-iY"):
        assert str(P(s)) == s


def test_syndrome_examples_and_homomorphism(rng):
    code = steane()
    assert syndrome_of(PauliOperator.identity(7), code) == 0
    assert syndrome_of(PauliOperator.single(7, 0, "X"), code) == 1 << 5
    assert syndrome_of(PauliOperator.single(7, 0, "Z"), code) == 1 << 2
    for _ in range(200):
        p = PauliOperator(7, int(rng.integers(128)), int(rng.integers(128)))
        q = PauliOperator(7, int(rng.integers(128)), int(rng.integers(128)))
        assert syndrome_of(multiply(p, q), code) == syndrome_of(p, code) ^ syndrome_of(q, code)


def test_adjointness_exhaustive_steane():
    code = steane()
    for x in range(128):
        for z in (0, 1, 5, 127):
            e = PauliOperator(7, x, z)
            s = syndrome_of(e, code)
            for a, el in enumerate(code.elements):
                assert pairing(e, el) == bin(s & a).count("1") % 2
