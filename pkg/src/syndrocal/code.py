"""Stabilizer codes, ordered stabilizer elements and minimal-weight decoding.

Syndrome words follow one convention everywhere: bit ``i`` is set exactly
when generator ``i`` (0-based) reports ``-1``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from pathlib import Path

from .errors import DimensionError, ParseError
from .f2kit import rank
from .pauli import PauliOperator, multiply, symplectic, syndrome_of, weight


def _symplectic_word(p: PauliOperator) -> int:
    return p.x | (p.z << p.n_qubits)


@dataclass(frozen=True)
class StabilizerCode:
    """An ``[[n, k]]`` stabilizer code with optional logical operators.

    Parameters
    ----------
    generators : tuple of PauliOperator
        ``m`` commuting, independent, Hermitian generators.
    logical_x, logical_z : tuple of PauliOperator
        Logical operators; each must commute with every generator.
    name : str
        Label used in output files.
    """

    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...] = ()
    logical_z: tuple[PauliOperator, ...] = ()
    name: str = "custom"

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise DimensionError("a code needs at least one generator")
        n = gens[0].n_qubits
        allops = gens + tuple(self.logical_x) + tuple(self.logical_z)
        if any(g.n_qubits != n for g in allops):
            raise DimensionError("operators act on different numbers of qubits")
        if any(not g.is_hermitian for g in gens):
            raise ValueError("generators must be Hermitian (phase +1 or -1)")
        for g, h in combinations(gens, 2):
            if symplectic(g.x, g.z, h.x, h.z):
                raise ValueError(f"generators {g} and {h} anticommute")
        if rank(_symplectic_word(g) for g in gens) != len(gens):
            raise ValueError("generators are not independent")
        for lo in tuple(self.logical_x) + tuple(self.logical_z):
            for g in gens:
                if symplectic(lo.x, lo.z, g.x, g.z):
                    raise ValueError(f"logical {lo} anticommutes with generator {g}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "logical_x", tuple(self.logical_x))
        object.__setattr__(self, "logical_z", tuple(self.logical_z))

    @property
    def n(self) -> int:
        return self.generators[0].n_qubits

    @property
    def m(self) -> int:
        return len(self.generators)

    @property
    def k(self) -> int:
        return self.n - self.m

    @cached_property
    def elements(self) -> tuple[PauliOperator, ...]:
        """``S(a)`` for every ``a`` in ``range(2**m)``."""
        out = [PauliOperator(self.n)]
        # S(a) for a with highest bit i is S(a without bit i) * S_i
        for i, g in enumerate(self.generators):
            out += [multiply(out[a], g) for a in range(1 << i)]
        return tuple(out)

    def syndrome(self, x: int, z: int) -> int:
        s = 0
        for i, g in enumerate(self.generators):
            s |= symplectic(x, z, g.x, g.z) << i
        return s

    def __hash__(self):
        return hash((self.generators, self.logical_x, self.logical_z))

    def __eq__(self, other):
        if not isinstance(other, StabilizerCode):
            return NotImplemented
        return (self.generators, self.logical_x, self.logical_z) == (
            other.generators, other.logical_x, other.logical_z)


_STEANE_ROWS = {
    "generators": ["+IIIXXXX", "+IXXIIXX", "+XIXIXIX", "+IIIZZZZ", "+IZZIIZZ", "+ZIZIZIZ"],
    "logical_x": ["+XXXXXXX"],
    "logical_z": ["+ZZZZZZZ"],
}


def steane() -> StabilizerCode:
    """The [[7,1,3]] Steane code with three X-type then three Z-type generators."""
    return StabilizerCode(
        tuple(PauliOperator.from_string(s) for s in _STEANE_ROWS["generators"]),
        tuple(PauliOperator.from_string(s) for s in _STEANE_ROWS["logical_x"]),
        tuple(PauliOperator.from_string(s) for s in _STEANE_ROWS["logical_z"]),
        name="steane",
    )


def stabilizer_element(code: StabilizerCode, a: int) -> PauliOperator:
    """The ordered product ``S_1^{a_1} ... S_m^{a_m}``, phase included."""
    if not 0 <= a < 1 << code.m:
        raise DimensionError(f"a={a} out of range for m={code.m}")
    return code.elements[a]


def weight_histogram(code: StabilizerCode) -> dict[int, int]:
    return dict(sorted(Counter(weight(s) for s in code.elements).items()))


# --- decoding ---------------------------------------------------------------


@dataclass(frozen=True)
class DecodeTable:
    """Correction for each syndrome word, ``entries[x]``."""

    code: StabilizerCode
    entries: tuple[PauliOperator, ...]

    def __getitem__(self, x: int) -> PauliOperator:
        return self.entries[x]

    def __len__(self) -> int:
        return len(self.entries)

    def rows(self) -> list[str]:
        """One line per syndrome: sign pattern (generator 1 first) and label.

        Lines are sorted by sign pattern with ``+`` before ``-``, so
        generator 1 varies slowest.
        """
        out = []
        for x, e in enumerate(self.entries):
            signs = " ".join("-" if (x >> i) & 1 else "+" for i in range(self.code.m))
            out.append(f"{signs} {correction_label(e)}")
        return sorted(out)


def correction_label(p: PauliOperator) -> str:
    """Compact label with 1-based indices, X factors before Z factors.

    A ``Y`` on qubit ``j`` renders as ``XjZj``; the identity renders as ``1``.
    """
    parts = [f"X{q + 1}" for q in range(p.n_qubits) if (p.x >> q) & 1]
    parts += [f"Z{q + 1}" for q in range(p.n_qubits) if (p.z >> q) & 1]
    return "".join(parts) or "1"


def _paulis_of_weight(n: int, w: int):
    for qubits in combinations(range(n), w):
        for kinds in product((1, 2, 3), repeat=w):
            x = z = 0
            for q, k in zip(qubits, kinds):
                if k & 1:
                    x |= 1 << q
                if k & 2:
                    z |= 1 << q
            yield x, z


def decode_table(code: StabilizerCode, max_weight: int | None = None) -> DecodeTable:
    """Minimal-weight correction for every syndrome by exhaustive search.

    Weights are searched upward until every syndrome has an entry.  Among
    equal-weight candidates the one with fewer single-qubit factors
    (``popcount(x) + popcount(z)``) wins, then the smaller ``(x, z)`` pair,
    so that ``X_i Z_j`` beats ``Y_j X_k``-style alternatives.
    """
    n, m = code.n, code.m
    limit = n if max_weight is None else max_weight
    best: dict[int, tuple] = {}
    for w in range(limit + 1):
        for x, z in _paulis_of_weight(n, w):
            s = code.syndrome(x, z)
            key = (w, x.bit_count() + z.bit_count(), x, z)
            if s not in best or key < best[s]:
                best[s] = key
        if len(best) == 1 << m:
            break
    if len(best) != 1 << m:
        raise ValueError(f"no correction of weight <= {limit} for some syndromes")
    entries = tuple(PauliOperator(n, best[s][2], best[s][3]) for s in range(1 << m))
    return DecodeTable(code, entries)


# --- text format ------------------------------------------------------------

_SECTIONS = ("generators", "logical_x", "logical_z")


def parse_code(text: str, name: str = "custom") -> StabilizerCode:
    """Read the sectioned text format written by :func:`dump_code`.

    Lines starting with ``#`` and blank lines are ignored.
    """
    sections: dict[str, list[PauliOperator]] = {s: [] for s in _SECTIONS}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith(":"):
            current = line[:-1].strip().lower()
            if current not in sections:
                raise ParseError(f"line {lineno}: unknown section {current!r}")
            continue
        if current is None:
            raise ParseError(f"line {lineno}: operator outside a section")
        sections[current].append(PauliOperator.from_string(line))
    if not sections["generators"]:
        raise ParseError("no generators given")
    return StabilizerCode(tuple(sections["generators"]), tuple(sections["logical_x"]),
                          tuple(sections["logical_z"]), name=name)


def dump_code(code: StabilizerCode) -> str:
    lines = []
    for sec in _SECTIONS:
        ops = getattr(code, sec)
        if ops or sec == "generators":
            lines.append(f"{sec}:")
            lines += [str(p) for p in ops]
    return "\n".join(lines) + "\n"


def load_code(spec: str) -> StabilizerCode:
    """``"steane"`` or a path to a code file."""
    if spec.lower() == "steane":
        return steane()
    path = Path(spec)
    return parse_code(path.read_text(), name=path.stem)


__all__ = [
    "StabilizerCode", "DecodeTable", "steane", "stabilizer_element", "weight_histogram",
    "decode_table", "correction_label", "parse_code", "dump_code", "load_code", "syndrome_of",
]
