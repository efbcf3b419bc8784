"""Closed-form joint outcome distribution of two identical faulty measurements."""
from __future__ import annotations

import numpy as np

from ..channel import JointErrorDistribution, bit_marginal, syndrome_words
from ..code import StabilizerCode
from ..errors import DimensionError
from ..f2kit import F2Function, walsh_array
from ..states import ideal_syndrome_distribution


def two_round_joint(P: JointErrorDistribution, state, code: StabilizerCode) -> F2Function:
    """Joint law of the two recorded words, packed as ``x | y << m``.

    Round one reports the true syndrome ``x0`` shifted by its flip ``u1``;
    the data error ``e1`` then shifts the true syndrome seen by round two,
    which adds an independent flip ``u2`` drawn from the flip marginal.
    """
    if P.n != code.n or P.m != code.m:
        raise DimensionError("distribution does not match the code")
    p = ideal_syndrome_distribution(state, code).values
    return two_round_from_distribution(P, p, code)


def two_round_from_distribution(P: JointErrorDistribution, p: np.ndarray,
                                code: StabilizerCode) -> F2Function:
    m = code.m
    M = 1 << m
    syn = syndrome_words(P.ex, P.ez, code.generators).astype(np.int64)
    # A[u1, s] = sum over e1 with syndrome s of P(e1, u1)
    A = np.zeros((M, M))
    np.add.at(A, (P.u.astype(np.int64), syn), P.p)
    # B[u1, t] = sum_s A[u1, s] Pu[t xor s]   (XOR convolution along s)
    pu = bit_marginal(P).values
    B = walsh_array(walsh_array(A) * walsh_array(pu)[None, :]) / M
    idx = np.arange(M)
    q = np.zeros((M, M))  # q[y, x]
    for x0 in np.nonzero(p > 0)[0]:
        # q(x, y) += p(x0) B[x ^ x0, y ^ x0]
        q += p[x0] * B[np.ix_(idx ^ x0, idx ^ x0)].T
    return F2Function(2 * m, np.clip(q, 0.0, None).reshape(-1))
