"""Finite-shot sampling of one- and two-round syndrome records.

Every random draw is keyed by ``(seed, shot index, stream)`` so a batch can
be produced in chunks, in parallel, or partially, and still come out
identical.  Stream 0 draws the ideal syndrome; circuit noise sites and
classical flips use the streams assigned when the circuit is compiled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .._kernels.rng import keyed_uniforms, seed_key
from ..channel import JointErrorDistribution, bit_marginal, syndrome_words
from ..code import StabilizerCode
from ..errors import DimensionError
from ..states import ideal_syndrome_distribution
from .circuit import NoisyCircuit, repeat
from .program import compile_circuit

CHUNK = 1 << 16


@dataclass(frozen=True)
class ShotRecord:
    x: int
    y: int | None
    lineage: str


@dataclass(frozen=True, eq=False)
class ShotBatch:
    """Outcome words for a batch of shots.

    ``x`` holds round-one words, ``y`` round-two words (or ``None``).
    """

    m: int
    x: np.ndarray
    y: np.ndarray | None
    seed: int
    shot_offset: int = 0

    @property
    def shots(self) -> int:
        return len(self.x)

    @property
    def rounds(self) -> int:
        return 1 if self.y is None else 2

    def __len__(self) -> int:
        return self.shots

    def records(self) -> list[ShotRecord]:
        ys = [None] * self.shots if self.y is None else [int(v) for v in self.y]
        return [ShotRecord(int(a), b, f"seed={self.seed}/shot={self.shot_offset + i}")
                for i, (a, b) in enumerate(zip(self.x, ys))]

    def histogram(self) -> np.ndarray:
        """Counts of round-one words, length ``2**m``."""
        return np.bincount(self.x.astype(np.int64), minlength=1 << self.m)

    def joint_histogram(self) -> np.ndarray:
        """Counts of ``x | y << m`` over ``2**(2m)`` cells."""
        if self.y is None:
            raise ValueError("single-round batch has no joint histogram")
        w = self.x.astype(np.int64) | (self.y.astype(np.int64) << self.m)
        return np.bincount(w, minlength=1 << (2 * self.m))


def _inverse_cdf(probs: np.ndarray, r: np.ndarray) -> np.ndarray:
    cum = np.cumsum(probs)
    return np.minimum(np.searchsorted(cum, r * cum[-1], side="right"), len(probs) - 1)


def sample_shots(source, state, shots: int, seed: int, rounds: int = 1,
                 code: StabilizerCode | None = None, shot_offset: int = 0,
                 backend=None, workers: int = 1) -> ShotBatch:
    """Draw ``shots`` records from a circuit or from a joint distribution.

    Parameters
    ----------
    source : NoisyCircuit or JointErrorDistribution
        Circuit mode propagates a Pauli frame per shot through the (repeated)
        circuit.  Distribution mode draws ``(e1, u1)`` from ``source`` and a
        fresh flip word for round two.
    state : ProductState or CodewordState
        Input state; only its ideal syndrome distribution matters.
    rounds : {1, 2}
    workers : int
        Threads used for chunks in circuit mode; output does not depend on it.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if rounds not in (1, 2):
        raise ValueError("rounds must be 1 or 2")
    if isinstance(source, NoisyCircuit):
        code = code or source.code
    if code is None:
        raise ValueError("a code is needed to sample from a distribution")
    m = code.m
    key = seed_key(seed)
    idx = np.arange(shots, dtype=np.uint64) + np.uint64(shot_offset)
    p = ideal_syndrome_distribution(state, code).values
    x0 = _inverse_cdf(p, keyed_uniforms(key, idx, 0)).astype(np.uint64)

    if isinstance(source, NoisyCircuit):
        if source.m != m:
            raise DimensionError("circuit and code disagree on the number of syndrome bits")
        circ = repeat(source, rounds) if rounds == 2 else source
        prog = compile_circuit(circ)
        kern = backend or _kernels.backend
        u0 = x0 | (x0 << np.uint64(m)) if rounds == 2 else x0.copy()
        starts = range(0, shots, CHUNK)

        def run(s):
            e = min(shots, s + CHUNK)
            return kern.frame_sample(*prog.kernel_sample_args(), key,
                                     np.uint64(shot_offset + s), np.ascontiguousarray(u0[s:e]))[0]

        if workers > 1 and shots > CHUNK:
            with ThreadPoolExecutor(workers) as pool:
                parts = list(pool.map(run, starts))
        else:
            parts = [run(s) for s in starts]
        u = np.concatenate(parts)
        mask = np.uint64((1 << m) - 1)
        x = u & mask
        y = (u >> np.uint64(m)) & mask if rounds == 2 else None
        return ShotBatch(m, x, y, seed, shot_offset)

    if not isinstance(source, JointErrorDistribution):
        raise TypeError("source must be a NoisyCircuit or a JointErrorDistribution")
    P = source
    if P.m != m or P.n != code.n:
        raise DimensionError("distribution does not match the code")
    j = _inverse_cdf(P.p, keyed_uniforms(key, idx, 1))
    x = x0 ^ P.u[j]
    y = None
    if rounds == 2:
        pu = bit_marginal(P).values
        u2 = _inverse_cdf(pu, keyed_uniforms(key, idx, 2)).astype(np.uint64)
        syn = syndrome_words(P.ex[j], P.ez[j], code.generators)
        y = x0 ^ syn ^ u2
    return ShotBatch(m, x, y, seed, shot_offset)
