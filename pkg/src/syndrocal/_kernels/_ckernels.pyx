# cython: language_level=3
"""Compiled hot loops: Walsh butterfly, batched backward Pauli propagation
and keyed Pauli-frame sampling.  Semantics mirror ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

DEF OP_H = 0
DEF OP_S = 1
DEF OP_CNOT = 2
DEF OP_CZ = 3
DEF OP_SWAP = 4
DEF OP_NOISE = 5
DEF OP_MEASURE = 6
DEF OP_RESET = 7
DEF OP_FLIP = 8

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = z + GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t shot, uint64_t stream) nogil:
    cdef uint64_t h = _mix(_mix(key ^ shot) ^ stream)
    return <double>(h >> 11) * (1.0 / 9007199254740992.0)


cdef inline uint64_t _bit(uint64_t w, int64_t q) nogil:
    return (w >> q) & 1ULL


cdef inline uint64_t _swap_bits(uint64_t w, int64_t a, int64_t b) nogil:
    cdef uint64_t d = ((w >> a) ^ (w >> b)) & 1ULL
    return w ^ ((d << a) | (d << b))


def fwht(double[:, ::1] values):
    """In-place unnormalized Walsh-Hadamard transform of every row."""
    cdef Py_ssize_t rows = values.shape[0], n = values.shape[1]
    cdef Py_ssize_t r, h, i, j
    cdef double a, b
    with nogil:
        for r in range(rows):
            h = 1
            while h < n:
                i = 0
                while i < n:
                    for j in range(i, i + h):
                        a = values[r, j]
                        b = values[r, j + h]
                        values[r, j] = a + b
                        values[r, j + h] = a - b
                    i += 2 * h
                h *= 2


def backprop(int64_t[:, ::1] ops, double[:, ::1] site_eig, int64_t[:, ::1] site_q,
             int64_t[::1] site_arity, double[::1] flip_q,
             uint64_t[::1] qx, uint64_t[::1] qz, uint64_t[::1] qb):
    """Joint character Lambda(Q, b) for every query (qx, qz, qb)."""
    cdef Py_ssize_t nq = qx.shape[0], L = ops.shape[0]
    cdef double[::1] out = np.empty(nq, dtype=np.float64)
    cdef Py_ssize_t i, k
    cdef uint64_t x, z, b, lx, lz, d
    cdef int64_t op, a0, a1, s
    cdef double val
    with nogil:
        for i in range(nq):
            x = qx[i]
            z = qz[i]
            b = qb[i]
            val = 1.0
            for k in range(L - 1, -1, -1):
                op = ops[k, 0]
                a0 = ops[k, 1]
                a1 = ops[k, 2]
                if op == OP_H:
                    d = (_bit(x, a0) ^ _bit(z, a0)) << a0
                    x ^= d
                    z ^= d
                elif op == OP_S:
                    z ^= _bit(x, a0) << a0
                elif op == OP_CNOT:
                    x ^= _bit(x, a0) << a1
                    z ^= _bit(z, a1) << a0
                elif op == OP_CZ:
                    z ^= (_bit(x, a0) << a1) | (_bit(x, a1) << a0)
                elif op == OP_SWAP:
                    x = _swap_bits(x, a0, a1)
                    z = _swap_bits(z, a0, a1)
                elif op == OP_NOISE:
                    s = a0
                    lx = _bit(x, site_q[s, 0])
                    lz = _bit(z, site_q[s, 0])
                    if site_arity[s] == 2:
                        lx |= _bit(x, site_q[s, 1]) << 1
                        lz |= _bit(z, site_q[s, 1]) << 1
                    val *= site_eig[s, lx | (lz << 2)]
                    if val == 0.0:
                        break
                elif op == OP_MEASURE:
                    x &= ~(1ULL << a0)
                    z ^= _bit(b, a1) << a0
                elif op == OP_RESET:
                    x &= ~(1ULL << a0)
                    z &= ~(1ULL << a0)
                elif op == OP_FLIP:
                    if _bit(b, a0):
                        val *= 1.0 - 2.0 * flip_q[a1]
            out[i] = val
    return np.asarray(out)


def frame_sample(int64_t[:, ::1] ops, int64_t[:, ::1] site_q, int64_t[::1] site_arity,
                 double[:, ::1] site_cum, int64_t[:, ::1] site_px, int64_t[:, ::1] site_pz,
                 int64_t[::1] site_nout, int64_t[::1] site_stream,
                 double[::1] flip_q, int64_t[::1] flip_stream,
                 uint64_t key, uint64_t shot_offset, uint64_t[::1] u0):
    """Propagate one Pauli frame per shot; returns (u, frame_x, frame_z)."""
    cdef Py_ssize_t shots = u0.shape[0], L = ops.shape[0]
    cdef uint64_t[::1] out_u = np.empty(shots, dtype=np.uint64)
    cdef uint64_t[::1] out_x = np.empty(shots, dtype=np.uint64)
    cdef uint64_t[::1] out_z = np.empty(shots, dtype=np.uint64)
    cdef Py_ssize_t i, k, j
    cdef uint64_t x, z, u, shot, d, lx, lz
    cdef int64_t op, a0, a1, s, q0, q1
    cdef double r
    with nogil:
        for i in range(shots):
            shot = shot_offset + <uint64_t>i
            x = 0
            z = 0
            u = u0[i]
            for k in range(L):
                op = ops[k, 0]
                a0 = ops[k, 1]
                a1 = ops[k, 2]
                if op == OP_H:
                    d = (_bit(x, a0) ^ _bit(z, a0)) << a0
                    x ^= d
                    z ^= d
                elif op == OP_S:
                    z ^= _bit(x, a0) << a0
                elif op == OP_CNOT:
                    x ^= _bit(x, a0) << a1
                    z ^= _bit(z, a1) << a0
                elif op == OP_CZ:
                    z ^= (_bit(x, a0) << a1) | (_bit(x, a1) << a0)
                elif op == OP_SWAP:
                    x = _swap_bits(x, a0, a1)
                    z = _swap_bits(z, a0, a1)
                elif op == OP_NOISE:
                    s = a0
                    r = _uniform(key, shot, <uint64_t>site_stream[s])
                    j = 0
                    while j < site_nout[s] - 1 and r >= site_cum[s, j]:
                        j += 1
                    lx = <uint64_t>site_px[s, j]
                    lz = <uint64_t>site_pz[s, j]
                    q0 = site_q[s, 0]
                    x ^= (lx & 1ULL) << q0
                    z ^= (lz & 1ULL) << q0
                    if site_arity[s] == 2:
                        q1 = site_q[s, 1]
                        x ^= ((lx >> 1) & 1ULL) << q1
                        z ^= ((lz >> 1) & 1ULL) << q1
                elif op == OP_MEASURE:
                    u ^= _bit(x, a0) << a1
                    z &= ~(1ULL << a0)
                elif op == OP_RESET:
                    x &= ~(1ULL << a0)
                    z &= ~(1ULL << a0)
                elif op == OP_FLIP:
                    r = _uniform(key, shot, <uint64_t>flip_stream[a1])
                    if r < flip_q[a1]:
                        u ^= 1ULL << a0
            out_u[i] = u
            out_x[i] = x
            out_z[i] = z
    return np.asarray(out_u), np.asarray(out_x), np.asarray(out_z)
