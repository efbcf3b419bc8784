"""Noisy Clifford circuits: instructions, builders and the text dump format.

Dump format, one instruction per line::

    QUBITS 10 DATA 7
    BITS 6
    H 7
    CNOT 7 4
    NOISE depolarizing2 lambda=0.01 7 4
    MEASURE 7 -> s2
    FLIP s2 0.05
    RESET 7

Qubit and bit indices are 0-based.  Floats are written with ``repr`` so a
dump/parse round trip is exact.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence, Union

from ..channel import (ClassicalFlipChannel, NoiseModel, PauliChannel, bit_flip,
                       depolarizing2, z_control)
from ..code import StabilizerCode
from ..errors import DimensionError, ParseError
from ..pauli import CliffordGate, PauliOperator
from . import steane_schedule


@dataclass(frozen=True)
class Gate:
    gate: CliffordGate

    @property
    def qubits(self):
        return self.gate.qubits


@dataclass(frozen=True)
class Noise:
    channel: PauliChannel

    @property
    def qubits(self):
        return self.channel.support


@dataclass(frozen=True)
class Measure:
    qubit: int
    bit: int

    @property
    def qubits(self):
        return (self.qubit,)


@dataclass(frozen=True)
class Flip:
    bit: int
    q: float

    qubits = ()

    def __post_init__(self):
        ClassicalFlipChannel(self.bit, self.q)


@dataclass(frozen=True)
class Reset:
    qubit: int

    @property
    def qubits(self):
        return (self.qubit,)


Instruction = Union[Gate, Noise, Measure, Flip, Reset]


@dataclass(frozen=True)
class NoisyCircuit:
    """A syndrome-extraction circuit with Pauli noise.

    Qubits ``0 .. n_data-1`` carry the code block; the rest are ancillas
    starting in ``|0>``.  ``m`` counts the classical syndrome bits.
    """

    n_qubits: int
    n_data: int
    m: int
    instructions: tuple[Instruction, ...]
    code: StabilizerCode | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not 0 <= self.n_data <= self.n_qubits <= 64:
            raise DimensionError("need 0 <= n_data <= n_qubits <= 64")
        for ins in self.instructions:
            if any(not 0 <= q < self.n_qubits for q in ins.qubits):
                raise DimensionError(f"{ins} touches a qubit outside 0..{self.n_qubits - 1}")
            if isinstance(ins, (Measure, Flip)) and not 0 <= ins.bit < self.m:
                raise DimensionError(f"{ins} writes a bit outside 0..{self.m - 1}")
        if self.code is not None and self.code.n != self.n_data:
            raise DimensionError("code size differs from the number of data qubits")

    def measured_bits(self) -> list[int]:
        return [ins.bit for ins in self.instructions if isinstance(ins, Measure)]

    def is_noiseless(self) -> bool:
        return not any(isinstance(i, (Noise, Flip)) for i in self.instructions)

    def noiseless(self) -> "NoisyCircuit":
        return replace(self, instructions=tuple(
            i for i in self.instructions if not isinstance(i, (Noise, Flip))))

    def dumps(self) -> str:
        return dump_circuit(self)


# --- builders ---------------------------------------------------------------


def _controlled(kind: int, anc: int, q: int) -> list[Instruction]:
    if kind == 1:  # X
        return [Gate(CliffordGate("CNOT", (anc, q)))]
    if kind == 2:  # Z
        return [Gate(CliffordGate("CZ", (anc, q)))]
    # controlled-Y = S_c . CX . CZ
    return [Gate(CliffordGate("CZ", (anc, q))), Gate(CliffordGate("CNOT", (anc, q))),
            Gate(CliffordGate("S", (anc,)))]


def build_sequential_extraction(code: StabilizerCode, shared_ancilla: bool = True) -> NoisyCircuit:
    """Measure one generator at a time through an ancilla.

    Each generator uses a Hadamard-sandwiched fan of controlled Paulis from
    the ancilla onto its support, then a Z measurement and a reset.  With
    ``shared_ancilla`` every generator reuses qubit ``n``; otherwise
    generator ``i`` gets qubit ``n + i``.
    """
    n, m = code.n, code.m
    ins: list[Instruction] = []
    for i, g in enumerate(code.generators):
        anc = n if shared_ancilla else n + i
        ins.append(Gate(CliffordGate("H", (anc,))))
        if g.phase == 2:
            # a minus sign flips the reported outcome: Z on the ancilla
            ins += [Gate(CliffordGate("S", (anc,)))] * 2
        for q in range(n):
            kind = ((g.x >> q) & 1) | (((g.z >> q) & 1) << 1)
            if kind:
                ins += _controlled(kind, anc, q)
        ins += [Gate(CliffordGate("H", (anc,))), Measure(anc, i), Reset(anc)]
    total = n + (1 if shared_ancilla else m)
    return NoisyCircuit(total, n, m, tuple(ins), code)


def build_parallel_extraction_steane(schedule: dict | None = None) -> NoisyCircuit:
    """Three-ancilla, two-half flagged extraction circuit for the Steane code.

    ``schedule`` defaults to :data:`steane_schedule.PARALLEL`; passing a
    modified copy is how tests inject a corrupted transcription.
    """
    from ..code import steane

    sch = steane_schedule.PARALLEL if schedule is None else schedule
    anc = sch["ancillas"]
    ins: list[Instruction] = []
    for half in sch["halves"]:
        ins += [Gate(CliffordGate("H", (a,))) for a in anc]
        for kind, a, b in half["gates"]:
            ins.append(Gate(CliffordGate(kind, (a, b))))
        ins += [Gate(CliffordGate("H", (a,))) for a in anc]
        for a, bit in zip(anc, half["bits"]):
            ins += [Measure(a, bit), Reset(a)]
    return NoisyCircuit(10, 7, 6, tuple(ins), steane())


def _z_side(gate: CliffordGate) -> tuple[int, int]:
    """Qubit order for the z-control channel: the higher index is the control side."""
    a, b = gate.qubits
    return (max(a, b), min(a, b))


def attach_noise(circuit: NoisyCircuit, models: Sequence[NoiseModel]) -> NoisyCircuit:
    """Insert noise instructions for each model in ``models``.

    Two-qubit models add a channel after every two-qubit gate.  The bit-flip
    model adds an X flip after every gate on each touched qubit and before
    every measurement.  Resets stay noiseless, which keeps each round of a
    repeated circuit self-contained.  The measurement-flip model adds a classical
    flip after every measurement.  Single-qubit gates stay noiseless for the
    two-qubit models.
    """
    ins = list(circuit.instructions)
    for model in models:
        out: list[Instruction] = []
        for i in ins:
            if model.kind == "bitflip" and isinstance(i, Measure):
                out.append(Noise(bit_flip(model.value, i.qubit)))
            out.append(i)
            if isinstance(i, Gate) and len(i.qubits) == 2:
                if model.kind == "depolarizing2":
                    out.append(Noise(depolarizing2(model.value, i.qubits)))
                elif model.kind == "z-control":
                    out.append(Noise(z_control(model.value, _z_side(i.gate))))
            if model.kind == "bitflip" and isinstance(i, Gate):
                out += [Noise(bit_flip(model.value, q)) for q in i.qubits]
            if model.kind == "measflip" and isinstance(i, Measure):
                out.append(Flip(i.bit, model.value))
        ins = out
    return replace(circuit, instructions=tuple(ins))


def repeat(circuit: NoisyCircuit, rounds: int) -> NoisyCircuit:
    """Run the circuit ``rounds`` times; round ``r`` writes bits ``r*m .. r*m+m-1``."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    m = circuit.m
    ins: list[Instruction] = []
    for r in range(rounds):
        for i in circuit.instructions:
            if isinstance(i, Measure):
                i = Measure(i.qubit, i.bit + r * m)
            elif isinstance(i, Flip):
                i = Flip(i.bit + r * m, i.q)
            ins.append(i)
    return NoisyCircuit(circuit.n_qubits, circuit.n_data, m * rounds, tuple(ins), None)


def build_circuit(code: StabilizerCode, layout: str) -> NoisyCircuit:
    """``"sequential"`` (any code) or ``"parallel"`` (Steane only)."""
    key = layout.strip().lower()
    if key == "sequential":
        return build_sequential_extraction(code)
    if key == "parallel":
        if code.name != "steane":
            raise ValueError("the parallel layout exists only for the Steane code")
        return build_parallel_extraction_steane()
    raise ValueError(f"unknown circuit layout {layout!r}")


# --- text format -------------------------------------------------------------


def _format(i: Instruction) -> str:
    if isinstance(i, Gate):
        return str(i.gate)
    if isinstance(i, Noise):
        return f"NOISE {i.channel.label()} " + " ".join(map(str, i.channel.support))
    if isinstance(i, Measure):
        return f"MEASURE {i.qubit} -> s{i.bit}"
    if isinstance(i, Flip):
        return f"FLIP s{i.bit} {i.q!r}"
    if isinstance(i, Reset):
        return f"RESET {i.qubit}"
    raise TypeError(i)


def dump_circuit(circuit: NoisyCircuit) -> str:
    lines = [f"QUBITS {circuit.n_qubits} DATA {circuit.n_data}", f"BITS {circuit.m}"]
    lines += [_format(i) for i in circuit.instructions]
    return "\n".join(lines) + "\n"


_NAMED = {"depolarizing2": depolarizing2, "z-control": z_control}


def _parse_noise(tokens: list[str], lineno: int) -> Noise:
    kind = tokens[0].lower()
    if kind == "pauli":
        qubits = tuple(int(t) for t in tokens[2:])
        probs = {}
        for item in tokens[1].split(","):
            letters, val = item.split("=")
            p = PauliOperator.from_string(letters)
            probs[(p.x, p.z)] = float(val)
        return Noise(PauliChannel(qubits, probs))
    key, _, val = tokens[1].partition("=")
    qubits = tuple(int(t) for t in tokens[2:])
    if kind == "bitflip" and key == "p" and len(qubits) == 1:
        return Noise(bit_flip(float(val), qubits[0]))
    if kind in _NAMED and key == "lambda" and len(qubits) == 2:
        return Noise(_NAMED[kind](float(val), qubits))
    raise ParseError(f"line {lineno}: bad NOISE instruction")


def parse_circuit(text: str, code: StabilizerCode | None = None) -> NoisyCircuit:
    n_qubits = n_data = m = None
    ins: list[Instruction] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].upper()
        try:
            if head == "QUBITS":
                n_qubits = int(tok[1])
                n_data = int(tok[3]) if len(tok) > 3 and tok[2].upper() == "DATA" else n_qubits
            elif head == "BITS":
                m = int(tok[1])
            elif head == "NOISE":
                ins.append(_parse_noise(tok[1:], lineno))
            elif head == "MEASURE":
                if tok[2] != "->" or not tok[3].startswith("s"):
                    raise ParseError(f"line {lineno}: expected MEASURE q -> sK")
                ins.append(Measure(int(tok[1]), int(tok[3][1:])))
            elif head == "FLIP":
                ins.append(Flip(int(tok[1].lstrip("s")), float(tok[2])))
            elif head == "RESET":
                ins.append(Reset(int(tok[1])))
            else:
                ins.append(Gate(CliffordGate(head, tuple(int(t) for t in tok[1:]))))
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    if n_qubits is None or m is None:
        raise ParseError("missing QUBITS or BITS header")
    return NoisyCircuit(n_qubits, n_data, m, tuple(ins), code)


def instructions_touching(circuit: NoisyCircuit, qubit: int) -> Iterable[Instruction]:
    return (i for i in circuit.instructions if qubit in i.qubits)
