"""Pauli operators as F_2 symplectic mask pairs with a tracked phase.

A :class:`PauliOperator` with masks ``(x, z)`` and phase exponent ``k``
denotes ``i^k`` times the tensor product that has, on qubit ``q``, ``X`` if
only bit ``q`` of ``x`` is set, ``Z`` if only bit ``q`` of ``z`` is set, ``Y``
if both are, and the identity otherwise.  Qubit 0 is the leftmost character
of the string form.

Single-qubit products follow ``XZ = -iY``, ``ZX = iY`` and the cyclic
``XY = iZ``, ``YZ = iX``, ``ZX = iY``.  All other phases derive from these.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import DimensionError, ParseError

if TYPE_CHECKING:
    from .code import StabilizerCode

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


@dataclass(frozen=True)
class PauliOperator:
    n_qubits: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 0 or self.n_qubits > 64:
            raise DimensionError(f"n_qubits={self.n_qubits} outside [0, 64]")
        if (self.x | self.z) >> self.n_qubits:
            raise DimensionError("mask has bits beyond n_qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # --- construction ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOperator":
        if not 0 <= qubit < n:
            raise DimensionError(f"qubit {qubit} out of range for n={n}")
        bit = 1 << qubit
        x = bit if kind in "XY" else 0
        z = bit if kind in "ZY" else 0
        return cls(n, x, z)

    @classmethod
    def from_string(cls, text: str) -> "PauliOperator":
        """Parse ``"+IIIXXXX"``, ``"-XZ"``, ``"-iY"`` and similar."""
        s = text.strip()
        i = 0
        while i < len(s) and s[i] in "+-i":
            i += 1
        prefix, body = s[:i], s[i:]
        if prefix not in _PREFIX_PHASE:
            raise ParseError(f"bad phase prefix {prefix!r} in {text!r}")
        x = z = 0
        for q, c in enumerate(body):
            if c not in "IXYZ":
                raise ParseError(f"bad Pauli character {c!r} in {text!r}")
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
        return cls(len(body), x, z, _PREFIX_PHASE[prefix])

    # --- rendering ------------------------------------------------------

    def letters(self) -> str:
        out = []
        for q in range(self.n_qubits):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            out.append("IXZY"[xb | (zb << 1)])
        return "".join(out)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.letters()

    def __repr__(self) -> str:
        return f"PauliOperator({str(self)!r})"

    # --- algebra --------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)

    def __neg__(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x, self.z, self.phase + 2)

    def unsigned(self) -> "PauliOperator":
        return PauliOperator(self.n_qubits, self.x, self.z)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian operators."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 - self.phase

    def key(self) -> tuple[int, int]:
        """The effective (phase-free) Pauli as a mask pair."""
        return (self.x, self.z)


def _check_same(p: PauliOperator, q: PauliOperator) -> None:
    if p.n_qubits != q.n_qubits:
        raise DimensionError(f"size mismatch: {p.n_qubits} vs {q.n_qubits} qubits")


def pairing(p: PauliOperator, q: PauliOperator) -> int:
    """Commutator pairing: 0 if ``p`` and ``q`` commute, 1 if they anticommute."""
    _check_same(p, q)
    return symplectic(p.x, p.z, q.x, q.z)


def symplectic(px: int, pz: int, qx: int, qz: int) -> int:
    return ((px & qz) ^ (pz & qx)).bit_count() & 1


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of ``i`` picked up when multiplying the string forms (x1,z1)(x2,z2)."""
    y1, xo1, zo1 = x1 & z1, x1 & ~z1, z1 & ~x1
    y2, xo2, zo2 = x2 & z2, x2 & ~z2, z2 & ~x2
    plus = (y1 & zo2).bit_count() + (xo1 & y2).bit_count() + (zo1 & xo2).bit_count()
    minus = (y1 & xo2).bit_count() + (xo1 & zo2).bit_count() + (zo1 & y2).bit_count()
    return (plus - minus) % 4


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    _check_same(p, q)
    k = p.phase + q.phase + product_phase(p.x, p.z, q.x, q.z)
    return PauliOperator(p.n_qubits, p.x ^ q.x, p.z ^ q.z, k)


def weight(p: PauliOperator) -> int:
    return (p.x | p.z).bit_count()


# --- Clifford gates -------------------------------------------------------

GATE_ARITY = {"H": 1, "S": 1, "X": 1, "Y": 1, "Z": 1, "CNOT": 2, "CZ": 2, "SWAP": 2}


@dataclass(frozen=True)
class CliffordGate:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unsupported gate {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        if len(qs) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {GATE_ARITY[self.kind]} qubit(s), got {qs}")
        if len(set(qs)) != len(qs) or min(qs) < 0:
            raise ValueError(f"invalid qubits {qs} for {self.kind}")
        object.__setattr__(self, "qubits", qs)

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


def conjugate(g: CliffordGate, p: PauliOperator) -> PauliOperator:
    """Return ``g p g^dagger``."""
    if max(g.qubits) >= p.n_qubits:
        raise DimensionError(f"gate {g} out of range for {p.n_qubits} qubits")
    x, z, k = p.x, p.z, p.phase
    bit = lambda w, q: (w >> q) & 1  # noqa: E731
    if g.kind == "H":
        (q,) = g.qubits
        xb, zb = bit(x, q), bit(z, q)
        k += 2 * (xb & zb)
        x ^= (xb ^ zb) << q
        z ^= (xb ^ zb) << q
    elif g.kind == "S":
        (q,) = g.qubits
        xb, zb = bit(x, q), bit(z, q)
        k += 2 * (xb & zb)
        z ^= xb << q
    elif g.kind == "X":
        (q,) = g.qubits
        k += 2 * bit(z, q)
    elif g.kind == "Z":
        (q,) = g.qubits
        k += 2 * bit(x, q)
    elif g.kind == "Y":
        (q,) = g.qubits
        k += 2 * (bit(x, q) ^ bit(z, q))
    elif g.kind == "CNOT":
        c, t = g.qubits
        xc, zc, xt, zt = bit(x, c), bit(z, c), bit(x, t), bit(z, t)
        k += 2 * (xc & zt & (xt ^ zc ^ 1))
        x ^= xc << t
        z ^= zt << c
    elif g.kind == "CZ":
        a, b = g.qubits
        # CZ = H_b CNOT(a, b) H_b
        for step in (CliffordGate("H", (b,)), CliffordGate("CNOT", (a, b)), CliffordGate("H", (b,))):
            p = conjugate(step, PauliOperator(p.n_qubits, x, z, k))
            x, z, k = p.x, p.z, p.phase
    elif g.kind == "SWAP":
        a, b = g.qubits
        for w in ("x", "z"):
            v = x if w == "x" else z
            d = bit(v, a) ^ bit(v, b)
            v ^= (d << a) | (d << b)
            if w == "x":
                x = v
            else:
                z = v
    return PauliOperator(p.n_qubits, x, z, k)


def syndrome_of(p: PauliOperator, code: "StabilizerCode") -> int:
    """Syndrome word: bit ``i`` is the pairing of ``p`` with generator ``i``."""
    if p.n_qubits != code.n:
        raise DimensionError(f"Pauli on {p.n_qubits} qubits, code on {code.n}")
    s = 0
    for i, g in enumerate(code.generators):
        s |= symplectic(p.x, p.z, g.x, g.z) << i
    return s
