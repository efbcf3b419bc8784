"""Numpy implementations of the hot loops.

Vectorized across rows / queries / shots rather than looping per element;
results are bit-identical to the compiled module.
"""
import numpy as np

from .rng import keyed_uniforms

OP_H, OP_S, OP_CNOT, OP_CZ, OP_SWAP, OP_NOISE, OP_MEASURE, OP_RESET, OP_FLIP = range(9)

_ONE = np.uint64(1)


def _bit(w, q):
    return (w >> np.uint64(q)) & _ONE


def _swap_bits(w, a, b):
    d = _bit(w, a) ^ _bit(w, b)
    return w ^ ((d << np.uint64(a)) | (d << np.uint64(b)))


def fwht(values):
    """In-place unnormalized Walsh-Hadamard transform of every row."""
    rows, n = values.shape
    h = 1
    while h < n:
        v = values.reshape(rows, n // (2 * h), 2, h)
        a = v[:, :, 0, :].copy()
        b = v[:, :, 1, :]
        v[:, :, 0, :] = a + b
        v[:, :, 1, :] = a - b
        h *= 2


def backprop(ops, site_eig, site_q, site_arity, flip_q, qx, qz, qb):
    x = np.array(qx, dtype=np.uint64)
    z = np.array(qz, dtype=np.uint64)
    b = np.asarray(qb, dtype=np.uint64)
    val = np.ones(x.shape[0])
    for op, a0, a1, _ in ops[::-1]:
        if op == OP_H:
            d = (_bit(x, a0) ^ _bit(z, a0)) << np.uint64(a0)
            x ^= d
            z ^= d
        elif op == OP_S:
            z ^= _bit(x, a0) << np.uint64(a0)
        elif op == OP_CNOT:
            x ^= _bit(x, a0) << np.uint64(a1)
            z ^= _bit(z, a1) << np.uint64(a0)
        elif op == OP_CZ:
            z ^= (_bit(x, a0) << np.uint64(a1)) | (_bit(x, a1) << np.uint64(a0))
        elif op == OP_SWAP:
            x = _swap_bits(x, a0, a1)
            z = _swap_bits(z, a0, a1)
        elif op == OP_NOISE:
            q0, q1 = site_q[a0]
            lx = _bit(x, q0)
            lz = _bit(z, q0)
            if site_arity[a0] == 2:
                lx |= _bit(x, q1) << _ONE
                lz |= _bit(z, q1) << _ONE
            val *= site_eig[a0][(lx | (lz << np.uint64(2))).astype(np.intp)]
        elif op == OP_MEASURE:
            x &= ~(_ONE << np.uint64(a0))
            z ^= _bit(b, a1) << np.uint64(a0)
        elif op == OP_RESET:
            keep = ~(_ONE << np.uint64(a0))
            x &= keep
            z &= keep
        elif op == OP_FLIP:
            val *= np.where(_bit(b, a0) == 1, 1.0 - 2.0 * flip_q[a1], 1.0)
    return val


def frame_sample(ops, site_q, site_arity, site_cum, site_px, site_pz, site_nout,
                 site_stream, flip_q, flip_stream, key, shot_offset, u0):
    u = np.array(u0, dtype=np.uint64)
    shots = np.arange(u.shape[0], dtype=np.uint64) + np.uint64(shot_offset)
    x = np.zeros_like(u)
    z = np.zeros_like(u)
    for op, a0, a1, _ in ops:
        if op == OP_H:
            d = (_bit(x, a0) ^ _bit(z, a0)) << np.uint64(a0)
            x ^= d
            z ^= d
        elif op == OP_S:
            z ^= _bit(x, a0) << np.uint64(a0)
        elif op == OP_CNOT:
            x ^= _bit(x, a0) << np.uint64(a1)
            z ^= _bit(z, a1) << np.uint64(a0)
        elif op == OP_CZ:
            z ^= (_bit(x, a0) << np.uint64(a1)) | (_bit(x, a1) << np.uint64(a0))
        elif op == OP_SWAP:
            x = _swap_bits(x, a0, a1)
            z = _swap_bits(z, a0, a1)
        elif op == OP_NOISE:
            nout = site_nout[a0]
            r = keyed_uniforms(key, shots, int(site_stream[a0]))
            j = np.minimum(np.searchsorted(site_cum[a0, :nout], r, side="right"), nout - 1)
            lx = site_px[a0, j].astype(np.uint64)
            lz = site_pz[a0, j].astype(np.uint64)
            q0, q1 = site_q[a0]
            x ^= (lx & _ONE) << np.uint64(q0)
            z ^= (lz & _ONE) << np.uint64(q0)
            if site_arity[a0] == 2:
                x ^= ((lx >> _ONE) & _ONE) << np.uint64(q1)
                z ^= ((lz >> _ONE) & _ONE) << np.uint64(q1)
        elif op == OP_MEASURE:
            u ^= _bit(x, a0) << np.uint64(a1)
            z &= ~(_ONE << np.uint64(a0))
        elif op == OP_RESET:
            keep = ~(_ONE << np.uint64(a0))
            x &= keep
            z &= keep
        elif op == OP_FLIP:
            r = keyed_uniforms(key, shots, int(flip_stream[a1]))
            u ^= np.where(r < flip_q[a1], _ONE << np.uint64(a0), np.uint64(0))
    return u, x, z
