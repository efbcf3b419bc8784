"""Gate table for the three-ancilla parallel Steane extraction circuit.

Data qubits are 0..6 (qubit 1 of the usual 1-based labels is index 0);
ancillas are 7, 8, 9.  Each half starts and ends with H on every ancilla.
The first half measures generators 3, 4, 5 (bits 2, 3, 4); the second
measures 6, 1, 2 (bits 5, 0, 1).  Ancilla-ancilla CZ gates are the
reordering compensation.  Gates are listed in time order; within one time
step gates act on disjoint qubits, so their listed order does not matter.
"""

A, B, C = 7, 8, 9

_FIRST = [
    ("CNOT", A, 4), ("CZ", B, 6), ("CZ", C, 5),
    ("CZ", A, C),
    ("CNOT", A, 0), ("CZ", B, 4), ("CZ", C, 1),
    ("CNOT", A, 2), ("CZ", B, 3), ("CZ", C, 6),
    ("CZ", A, B),
    ("CNOT", A, 6), ("CZ", B, 5), ("CZ", C, 2),
]

# second half: the same skeleton with the roles of CNOT and CZ on data swapped
_SECOND = [
    ("CZ", A, 4), ("CNOT", B, 6), ("CNOT", C, 5),
    ("CZ", A, C),
    ("CZ", A, 0), ("CNOT", B, 4), ("CNOT", C, 1),
    ("CZ", A, 2), ("CNOT", B, 3), ("CNOT", C, 6),
    ("CZ", A, B),
    ("CZ", A, 6), ("CNOT", B, 5), ("CNOT", C, 2),
]

PARALLEL = {
    "ancillas": (A, B, C),
    "halves": (
        {"gates": tuple(_FIRST), "bits": (2, 3, 4)},
        {"gates": tuple(_SECOND), "bits": (5, 0, 1)},
    ),
}

# Reference exponents for uniform two-qubit depolarizing noise on this
# circuit, listed in the external index order where generator 1 is the
# most significant of six bits (see ``external_index``).
GAMMA_EXPONENTS = (
    0, 21, 8, 22, 10, 22, 12, 23, 11, 23, 13, 24, 13, 25, 14, 25, 20,
    27, 21, 27, 22, 26, 21, 26, 19, 26, 20, 25, 22, 27, 22, 27, 21, 27,
    24, 27, 23, 27, 23, 26, 20, 26, 24, 26, 21, 26, 24, 27, 19, 26, 23,
    26, 25, 27, 24, 28, 24, 26, 25, 27, 26, 28, 26, 28,
)
BETA_EXPONENTS = (
    0, 18, 21, 16, 23, 16, 15, 15, 18, 20, 26, 26, 27, 25, 23, 23, 21,
    26, 24, 28, 27, 25, 26, 25, 16, 26, 28, 18, 25, 23, 22, 24, 23, 27,
    27, 25, 26, 28, 28, 26, 16, 25, 25, 23, 28, 20, 22, 23, 15, 23, 26,
    22, 28, 22, 18, 22, 15, 23, 25, 24, 26, 23, 22, 18,
)


def external_index(a: int, m: int = 6) -> int:
    """Bit-reverse an ``m``-bit word (generator 1 moves from the LSB to the MSB)."""
    return int(format(a, f"0{m}b")[::-1], 2)
