"""Lower a :class:`NoisyCircuit` to the flat integer arrays the kernels consume."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .._kernels import OPCODES
from .circuit import Flip, Gate, Measure, Noise, NoisyCircuit, Reset

# stream 0 is reserved for drawing the ideal syndrome of each shot
FIRST_STREAM = 1


@dataclass(frozen=True, eq=False)
class Program:
    ops: np.ndarray          # (L, 4) int64: opcode, arg0, arg1, unused
    site_eig: np.ndarray     # (S, 16) eigenvalue tables
    site_q: np.ndarray       # (S, 2) qubits of each noise site
    site_arity: np.ndarray   # (S,)
    site_cum: np.ndarray     # (S, 16) cumulative outcome probabilities
    site_px: np.ndarray      # (S, 16) local x masks of outcomes
    site_pz: np.ndarray      # (S, 16)
    site_nout: np.ndarray    # (S,)
    site_stream: np.ndarray  # (S,)
    flip_q: np.ndarray       # (F,)
    flip_stream: np.ndarray  # (F,)

    @property
    def n_sites(self) -> int:
        return len(self.site_nout)

    def kernel_sample_args(self):
        return (self.ops, self.site_q, self.site_arity, self.site_cum, self.site_px,
                self.site_pz, self.site_nout, self.site_stream, self.flip_q, self.flip_stream)

    def kernel_backprop_args(self):
        return (self.ops, self.site_eig, self.site_q, self.site_arity, self.flip_q)


def compile_circuit(circuit: NoisyCircuit) -> Program:
    return _compile_cached(circuit)


@lru_cache(maxsize=64)
def _compile_cached(circuit: NoisyCircuit) -> Program:
    ops, eig, sq, ar, cum, px, pz, nout, flips = [], [], [], [], [], [], [], [], []
    for ins in circuit.instructions:
        if isinstance(ins, Gate):
            kind = ins.gate.kind
            if kind in ("X", "Y", "Z"):
                continue  # only changes signs, invisible to frames
            qs = ins.gate.qubits + (0,) * (2 - len(ins.gate.qubits))
            ops.append((OPCODES[kind], qs[0], qs[1], 0))
        elif isinstance(ins, Noise):
            ch = ins.channel
            s = len(eig)
            ops.append((OPCODES["NOISE"], s, 0, 0))
            eig.append(ch.eigen_table())
            sq.append(ch.support + (0,) * (2 - ch.arity))
            if ch.arity > 2:
                raise ValueError("noise channels on more than two qubits are not supported")
            ar.append(ch.arity)
            items = list(ch.probs.items())
            c = np.ones(16)
            c[:len(items)] = np.cumsum([p for _, p in items])
            cum.append(c)
            px.append([k[0] for k, _ in items] + [0] * (16 - len(items)))
            pz.append([k[1] for k, _ in items] + [0] * (16 - len(items)))
            nout.append(len(items))
        elif isinstance(ins, Measure):
            ops.append((OPCODES["MEASURE"], ins.qubit, ins.bit, 0))
        elif isinstance(ins, Reset):
            ops.append((OPCODES["RESET"], ins.qubit, 0, 0))
        elif isinstance(ins, Flip):
            ops.append((OPCODES["FLIP"], ins.bit, len(flips), 0))
            flips.append(ins.q)
        else:  # pragma: no cover
            raise TypeError(ins)
    S, F = len(eig), len(flips)

    def arr(v, shape, dtype):
        a = np.array(v, dtype=dtype) if len(v) else np.zeros(shape, dtype=dtype)
        return np.ascontiguousarray(a.reshape(shape))

    return Program(
        ops=arr(ops, (len(ops), 4), np.int64),
        site_eig=arr(eig, (S, 16), np.float64),
        site_q=arr(sq, (S, 2), np.int64),
        site_arity=arr(ar, (S,), np.int64),
        site_cum=arr(cum, (S, 16), np.float64),
        site_px=arr(px, (S, 16), np.int64),
        site_pz=arr(pz, (S, 16), np.int64),
        site_nout=arr(nout, (S,), np.int64),
        site_stream=np.arange(FIRST_STREAM, FIRST_STREAM + S, dtype=np.int64),
        flip_q=arr(flips, (F,), np.float64),
        flip_stream=np.arange(FIRST_STREAM + S, FIRST_STREAM + S + F, dtype=np.int64),
    )
