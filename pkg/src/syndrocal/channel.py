"""Pauli channels, classical flips and joint (error, outcome-flip) distributions.

Channel probabilities are keyed by *local* mask pairs: bit ``j`` of a local
mask refers to ``support[j]``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionError, DistributionError, ParseError
from .f2kit import F2Function
from .pauli import PauliOperator, symplectic

PRUNE = 1e-15


@dataclass(frozen=True, eq=False)
class PauliChannel:
    """A probability distribution over Paulis on ``support``.

    Parameters
    ----------
    support : tuple of int
        Global qubit indices, in local bit order.
    probs : mapping
        ``(x_local, z_local) -> probability``.
    kind, params : str, tuple
        Name and parameters for text output; ``"pauli"`` for ad-hoc channels.
    """

    support: tuple[int, ...]
    probs: Mapping[tuple[int, int], float]
    kind: str = "pauli"
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        support = tuple(int(q) for q in self.support)
        if len(set(support)) != len(support):
            raise DimensionError(f"repeated qubit in support {support}")
        k = len(support)
        probs = {}
        for (x, z), p in self.probs.items():
            if (x | z) >> k:
                raise DimensionError(f"Pauli ({x},{z}) exceeds a {k}-qubit support")
            if p < -1e-15:
                raise DistributionError(f"negative probability {p}")
            if p > 0:
                probs[(int(x), int(z))] = probs.get((int(x), int(z)), 0.0) + float(p)
        total = sum(probs.values())
        if abs(total - 1.0) > 1e-12:
            raise DistributionError(f"channel probabilities sum to {total!r}")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", dict(sorted(probs.items())))

    def _key(self):
        return (self.support, tuple(self.probs.items()), self.kind, self.params)

    def __eq__(self, other):
        if not isinstance(other, PauliChannel):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def arity(self) -> int:
        return len(self.support)

    def on(self, qubits: Sequence[int]) -> "PauliChannel":
        """Same channel moved to other qubits."""
        return PauliChannel(tuple(qubits), self.probs, self.kind, self.params)

    def label(self) -> str:
        if self.kind == "pauli":
            body = ",".join(
                f"{PauliOperator(self.arity, x, z).letters()}={p!r}" for (x, z), p in self.probs.items())
            return f"pauli {body}"
        return " ".join([self.kind] + [f"{k}={v!r}" for k, v in self.params])

    def eigen_table(self) -> np.ndarray:
        """Eigenvalue for every local Pauli, indexed ``lx | lz << 2`` (16 slots)."""
        out = np.zeros(16)
        for lx in range(1 << self.arity):
            for lz in range(1 << self.arity):
                out[lx | (lz << 2)] = sum(
                    p * (1 - 2 * symplectic(x, z, lx, lz)) for (x, z), p in self.probs.items())
        return out


def eigenvalue(ch: PauliChannel, r: PauliOperator) -> float:
    """``sum_e p(e) (-1)^<e, r>`` for an observable ``r`` on the support."""
    if r.n_qubits != ch.arity:
        raise DimensionError(f"observable on {r.n_qubits} qubits, channel on {ch.arity}")
    return float(sum(p * (1 - 2 * symplectic(x, z, r.x, r.z)) for (x, z), p in ch.probs.items()))


def _check_rate(name: str, v: float) -> float:
    v = float(v)
    if not 0.0 <= v <= 1.0 or math.isnan(v):
        raise ValueError(f"{name}={v} outside [0, 1]")
    return v


def depolarizing2(lam: float, qubits: Sequence[int] = (0, 1)) -> PauliChannel:
    """Two-qubit depolarizing channel: every one of the 16 Paulis gets ``lam/16``
    on top of ``1 - lam`` on the identity."""
    lam = _check_rate("lambda", lam)
    probs = {(x, z): lam / 16 for x in range(4) for z in range(4)}
    probs[(0, 0)] = 1.0 - 15.0 * lam / 16.0
    return PauliChannel(tuple(qubits), probs, "depolarizing2", (("lambda", lam),))


def z_control(lam: float, qubits: Sequence[int] = (0, 1)) -> PauliChannel:
    """``Z`` on the first listed qubit with probability ``lam``."""
    lam = _check_rate("lambda", lam)
    return PauliChannel(tuple(qubits), {(0, 0): 1.0 - lam, (0, 1): lam}, "z-control",
                        (("lambda", lam),))


def bit_flip(p: float, qubit: int = 0) -> PauliChannel:
    p = _check_rate("p", p)
    return PauliChannel((qubit,), {(0, 0): 1.0 - p, (1, 0): p}, "bitflip", (("p", p),))


@dataclass(frozen=True)
class ClassicalFlipChannel:
    """Flip syndrome bit ``bit`` with probability ``q``."""

    bit: int
    q: float

    def __post_init__(self):
        _check_rate("q", self.q)


# --- noise specifications -------------------------------------------------

NOISE_KINDS = {"depolarizing2": "lambda", "z-control": "lambda", "bitflip": "p", "measflip": "q"}


@dataclass(frozen=True)
class NoiseModel:
    """One named noise family with its single rate parameter."""

    kind: str
    value: float

    def __str__(self):
        return f"{self.kind}:{NOISE_KINDS[self.kind]}={self.value!r}"

    def with_value(self, value: float) -> "NoiseModel":
        return NoiseModel(self.kind, value)


def parse_noise(spec: str) -> tuple[NoiseModel, ...]:
    """Parse ``"depolarizing2:lambda=0.01"``; several models join with ``+``.

    ``"none"`` or an empty string means no noise.
    """
    text = spec.strip().lower()
    if text in ("", "none", "noiseless"):
        return ()
    out = []
    for part in text.split("+"):
        m = re.fullmatch(r"\s*([a-z0-9_-]+)\s*(?::\s*([a-z_]+)\s*=\s*([^\s]+))?\s*", part)
        if not m:
            raise ParseError(f"cannot parse noise model {part!r}")
        kind, key, val = m.groups()
        kind = kind.replace("_", "-")
        if kind in ("zcontrol", "z-on-control"):
            kind = "z-control"
        if kind not in NOISE_KINDS:
            raise ParseError(f"unknown noise kind {kind!r}; known: {', '.join(NOISE_KINDS)}")
        if key is None:
            raise ParseError(f"noise model {kind!r} needs {NOISE_KINDS[kind]}=<value>")
        if key != NOISE_KINDS[kind]:
            raise ParseError(f"{kind} takes {NOISE_KINDS[kind]}=, not {key}=")
        try:
            value = float(val)
        except ValueError:
            raise ParseError(f"bad number {val!r} in {part!r}") from None
        out.append(NoiseModel(kind, _check_rate(key, value)))
    return tuple(out)


# --- joint distributions -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class JointErrorDistribution:
    """Sparse distribution over (data Pauli ``(x, z)``, flip word ``u``).

    Stored as parallel arrays sorted by key with duplicates merged.
    """

    n: int
    m: int
    ex: np.ndarray = field(repr=False)
    ez: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    p: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 0 or self.n > 64 or self.m < 0 or self.m > 64:
            raise DimensionError("unsupported sizes")
        ex = np.asarray(self.ex, dtype=np.uint64).ravel()
        ez = np.asarray(self.ez, dtype=np.uint64).ravel()
        u = np.asarray(self.u, dtype=np.uint64).ravel()
        p = np.asarray(self.p, dtype=np.float64).ravel()
        if not (len(ex) == len(ez) == len(u) == len(p)):
            raise DimensionError("array lengths differ")
        if len(p) and (np.any((ex | ez) >> np.uint64(self.n)) or np.any(u >> np.uint64(self.m))):
            raise DimensionError("entry out of range")
        if np.any(p < -1e-15):
            raise DistributionError("negative probability")
        if abs(p.sum() - 1.0) > 1e-9:
            raise DistributionError(f"joint distribution sums to {p.sum()!r}")
        ex, ez, u, p = _merge(ex, ez, u, p)
        for name, arr in (("ex", ex), ("ez", ez), ("u", u), ("p", p)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @classmethod
    def from_dict(cls, n: int, m: int, probs: Mapping) -> "JointErrorDistribution":
        """From ``{((x, z), u): p}``."""
        items = list(probs.items())
        ex = [k[0][0] for k, _ in items]
        ez = [k[0][1] for k, _ in items]
        u = [k[1] for k, _ in items]
        return cls(n, m, ex, ez, u, [v for _, v in items])

    @classmethod
    def ideal(cls, n: int, m: int) -> "JointErrorDistribution":
        return cls(n, m, [0], [0], [0], [1.0])

    def __len__(self) -> int:
        return len(self.p)

    def as_dict(self) -> dict:
        return {((int(a), int(b)), int(c)): float(v)
                for a, b, c, v in zip(self.ex, self.ez, self.u, self.p)}

    def character(self, qx: int, qz: int, b: int) -> float:
        """``sum P(e,u) (-1)^(<e,Q> + u.b)``."""
        return float(self.characters([qx], [qz], [b])[0])

    def characters(self, qx, qz, qb) -> np.ndarray:
        qx = np.asarray(qx, dtype=np.uint64)
        qz = np.asarray(qz, dtype=np.uint64)
        qb = np.asarray(qb, dtype=np.uint64)
        out = np.empty(len(qx))
        for i in range(len(qx)):
            w = (self.ex & qz[i]) ^ (self.ez & qx[i])
            par = _parity(w) ^ _parity(self.u & qb[i])
            out[i] = float(np.dot(self.p, 1.0 - 2.0 * par))
        return out

    def data_marginal(self) -> dict[tuple[int, int], float]:
        keys = self.ex | (self.ez << np.uint64(self.n))
        uk, inv = np.unique(keys, return_inverse=True)
        w = np.bincount(inv, weights=self.p)
        mask = np.uint64((1 << self.n) - 1)
        return {(int(k & mask), int(k >> np.uint64(self.n))): float(v) for k, v in zip(uk, w)}


def _parity(w: np.ndarray) -> np.ndarray:
    w = w.copy()
    for s in (32, 16, 8, 4, 2, 1):
        w ^= w >> np.uint64(s)
    return (w & np.uint64(1)).astype(np.int64)


def _merge(ex, ez, u, p):
    if len(p) == 0:
        return ex, ez, u, p
    order = np.lexsort((u, ez, ex))
    ex, ez, u, p = ex[order], ez[order], u[order], p[order]
    new = np.ones(len(p), dtype=bool)
    new[1:] = (ex[1:] != ex[:-1]) | (ez[1:] != ez[:-1]) | (u[1:] != u[:-1])
    idx = np.cumsum(new) - 1
    ps = np.bincount(idx, weights=p)
    ex, ez, u = ex[new], ez[new], u[new]
    keep = ps > PRUNE
    return ex[keep], ez[keep], u[keep], ps[keep]


def bit_marginal(P: JointErrorDistribution) -> F2Function:
    """``u -> sum_e P(e, u)``."""
    vals = np.bincount(P.u.astype(np.int64), weights=P.p, minlength=1 << P.m)
    return F2Function(P.m, vals)


def conditional(P: JointErrorDistribution, u: int) -> PauliChannel:
    """Distribution of the data error given flip word ``u``."""
    sel = P.u == np.uint64(u)
    mass = float(P.p[sel].sum())
    if mass <= 0.0:
        raise DistributionError(f"flip word {u} has zero probability")
    probs: dict = {}
    for x, z, v in zip(P.ex[sel], P.ez[sel], P.p[sel]):
        probs[(int(x), int(z))] = probs.get((int(x), int(z)), 0.0) + v / mass
    # renormalize away rounding so the channel check at 1e-12 holds
    tot = sum(probs.values())
    return PauliChannel(tuple(range(P.n)), {k: v / tot for k, v in probs.items()})


def syndrome_words(ex: np.ndarray, ez: np.ndarray, generators: Sequence[PauliOperator]) -> np.ndarray:
    """Vectorized syndrome of many mask pairs against ``generators``."""
    s = np.zeros(len(ex), dtype=np.uint64)
    for i, g in enumerate(generators):
        w = (ex & np.uint64(g.z)) ^ (ez & np.uint64(g.x))
        s |= _parity(w).astype(np.uint64) << np.uint64(i)
    return s


def compose_faulty(Q: JointErrorDistribution, P: JointErrorDistribution,
                   t_generators: Sequence[PauliOperator]) -> JointErrorDistribution:
    """Distribution of measuring with ``P`` and then with ``Q``.

    ``Q`` belongs to a measurement of ``t_generators``.  The result lives on
    ``P.m + Q.m`` flip bits, ``P``'s word in the low bits.  The later
    measurement sees the earlier data error through its syndrome, which is
    the twist relative to a plain convolution.
    """
    if Q.n != P.n:
        raise DimensionError(f"data sizes differ: {Q.n} vs {P.n}")
    if len(t_generators) != Q.m:
        raise DimensionError(f"{len(t_generators)} generators for {Q.m} flip bits")
    if any(g.n_qubits != P.n for g in t_generators):
        raise DimensionError("generator size does not match data qubits")
    syn = syndrome_words(P.ex, P.ez, t_generators)
    ex = (Q.ex[:, None] ^ P.ex[None, :]).ravel()
    ez = (Q.ez[:, None] ^ P.ez[None, :]).ravel()
    v = (Q.u[:, None] ^ syn[None, :]).ravel()
    u = np.broadcast_to(P.u[None, :], (len(Q), len(P))).ravel()
    word = u | (v << np.uint64(P.m))
    p = (Q.p[:, None] * P.p[None, :]).ravel()
    return JointErrorDistribution(P.n, P.m + Q.m, ex, ez, word, p)
