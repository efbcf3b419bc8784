"""Exact joint distribution by forward propagation of a sparse frame distribution."""
from __future__ import annotations

import numpy as np

from ..channel import JointErrorDistribution, _merge
from ..errors import SupportCapExceeded
from .circuit import Flip, Gate, Measure, Noise, NoisyCircuit, Reset

DEFAULT_CAP = 20_000_000

_ONE = np.uint64(1)


def _bit(w, q):
    return (w >> np.uint64(q)) & _ONE


def exact_joint_distribution(circuit: NoisyCircuit, cap: int = DEFAULT_CAP) -> JointErrorDistribution:
    """Distribution of (final data error, outcome-flip word) for the circuit.

    Frames on ancillas are cleared at reset; any ancilla frame left at the
    end is traced out.  Raises :class:`SupportCapExceeded` when the number
    of (frame, word) entries, before or after merging duplicates, passes
    ``cap``; the spectral engine has no such limit.
    """
    x = np.zeros(1, dtype=np.uint64)
    z = np.zeros(1, dtype=np.uint64)
    u = np.zeros(1, dtype=np.uint64)
    p = np.ones(1)
    for ins in circuit.instructions:
        if isinstance(ins, Gate):
            x, z = _apply_gate(ins.gate.kind, ins.gate.qubits, x, z)
        elif isinstance(ins, Noise):
            ch = ins.channel
            outs = list(ch.probs.items())
            if len(p) * len(outs) > cap:  # bound the pre-merge working set
                raise SupportCapExceeded(
                    f"support would reach {len(p) * len(outs)} entries (cap {cap}); "
                    "use the spectral engine instead")
            dx = np.zeros(len(outs), dtype=np.uint64)
            dz = np.zeros(len(outs), dtype=np.uint64)
            for j, ((lx, lz), _) in enumerate(outs):
                for k, q in enumerate(ch.support):
                    dx[j] |= np.uint64(((lx >> k) & 1) << q)
                    dz[j] |= np.uint64(((lz >> k) & 1) << q)
            w = np.array([v for _, v in outs])
            x = (x[:, None] ^ dx[None, :]).ravel()
            z = (z[:, None] ^ dz[None, :]).ravel()
            u = np.repeat(u, len(outs))
            p = (p[:, None] * w[None, :]).ravel()
            x, z, u, p = _merge(x, z, u, p)
            if len(p) > cap:
                raise SupportCapExceeded(
                    f"support reached {len(p)} entries (cap {cap}); use the spectral engine instead")
        elif isinstance(ins, Measure):
            u = u ^ (_bit(x, ins.qubit) << np.uint64(ins.bit))
            z = z & ~(_ONE << np.uint64(ins.qubit))
            x, z, u, p = _merge(x, z, u, p)
        elif isinstance(ins, Reset):
            keep = ~(_ONE << np.uint64(ins.qubit))
            x, z = x & keep, z & keep
            x, z, u, p = _merge(x, z, u, p)
        elif isinstance(ins, Flip):
            bit = _ONE << np.uint64(ins.bit)
            x = np.concatenate([x, x])
            z = np.concatenate([z, z])
            u = np.concatenate([u, u ^ bit])
            p = np.concatenate([p * (1 - ins.q), p * ins.q])
            x, z, u, p = _merge(x, z, u, p)
    data = np.uint64((1 << circuit.n_data) - 1)
    return JointErrorDistribution(circuit.n_data, circuit.m, x & data, z & data, u, p / p.sum())


def _apply_gate(kind, qs, x, z):
    if kind == "H":
        (q,) = qs
        d = (_bit(x, q) ^ _bit(z, q)) << np.uint64(q)
        return x ^ d, z ^ d
    if kind == "S":
        (q,) = qs
        return x, z ^ (_bit(x, q) << np.uint64(q))
    if kind in ("X", "Y", "Z"):
        return x, z
    a, b = qs
    if kind == "CNOT":
        return x ^ (_bit(x, a) << np.uint64(b)), z ^ (_bit(z, b) << np.uint64(a))
    if kind == "CZ":
        return x, z ^ (_bit(x, a) << np.uint64(b)) ^ (_bit(x, b) << np.uint64(a))
    if kind == "SWAP":
        def sw(w):
            d = _bit(w, a) ^ _bit(w, b)
            return w ^ ((d << np.uint64(a)) | (d << np.uint64(b)))
        return sw(x), sw(z)
    raise ValueError(kind)
