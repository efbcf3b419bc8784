"""Independent per-qubit Pauli channel estimation from stabilizer expectations.

Works for the Steane code: each of the three generator families (X-type,
Z-type and their same-support Y-type products) gives seven element
expectations, a log-linear system turns those into seven single-qubit
Bloch components, and three such components per qubit give the rates.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._kernels.rng import derive_seed
from .code import StabilizerCode
from .errors import DimensionError

LOG_FLOOR = 1e-9
DISJOINT_SUPPORT = math.inf
COND_LIMIT = 1e12

# element words (generator 1 = bit 0) in row order of the D matrix
D_ORDER = (0b001, 0b010, 0b011, 0b100, 0b101, 0b110, 0b111)

H_743 = np.array([
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1],
], dtype=np.int64)


def d_matrix() -> np.ndarray:
    """Supports of the seven nonzero combinations of the three Hamming rows.

    Row ``r`` is the XOR of the rows of :data:`H_743` selected by ``D_ORDER[r]``.
    """
    rows = []
    for a in D_ORDER:
        r = np.zeros(7, dtype=np.int64)
        for i in range(3):
            if (a >> i) & 1:
                r ^= H_743[i]
        rows.append(r)
    return np.array(rows)


_D_INV = np.linalg.inv(d_matrix().astype(float))


@dataclass(frozen=True, eq=False)
class BlochEstimate:
    values: np.ndarray  # per-qubit expectation
    clipped: np.ndarray  # bool: an input was floored before the log


def bloch_from_stabilizers(expectations, eps: float = LOG_FLOOR) -> BlochEstimate:
    """``exp(D^-1 log v)`` for the seven element expectations ``v`` in D-row order."""
    v = np.asarray(expectations, dtype=float)
    if v.shape != (7,):
        raise DimensionError("need exactly seven element expectations")
    clipped = ~(v >= eps)
    logs = np.log(np.clip(np.nan_to_num(v, nan=eps), eps, 1.0))
    out = np.exp(_D_INV @ logs)
    # a qubit is flagged when any clipped input feeds it
    flags = (np.abs(_D_INV) > 1e-12) @ clipped.astype(float) > 0
    return BlochEstimate(out, flags)


@dataclass(frozen=True, eq=False)
class SingleQubitRates:
    """Rows ``(p_id, p_x, p_y, p_z)`` per qubit plus a per-qubit flag string."""

    table: np.ndarray
    flags: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.table)

    @property
    def px(self):
        return self.table[:, 1]

    @property
    def py(self):
        return self.table[:, 2]

    @property
    def pz(self):
        return self.table[:, 3]


def clamp_renormalize(rates: SingleQubitRates) -> SingleQubitRates:
    """Clip each component to [0, 1] and rescale rows to sum to one.

    A row that clips to all zeros falls back to the identity and is flagged
    ``degenerate``.
    """
    t = np.clip(np.asarray(rates.table, dtype=float), 0.0, 1.0)
    flags = list(rates.flags)
    sums = t.sum(axis=1)
    for i in np.nonzero(sums <= 0)[0]:
        warnings.warn(f"qubit {i}: all rates clipped to zero; using the identity channel")
        t[i] = (1.0, 0.0, 0.0, 0.0)
        sums[i] = 1.0
        flags[i] = _join(flags[i], "degenerate")
    return SingleQubitRates(t / sums[:, None], tuple(flags))


def _join(a: str, b: str) -> str:
    return b if not a else f"{a};{b}"


def rates_from_bloch(x, y, z, flags=None) -> SingleQubitRates:
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    px = (1 + x - y - z) / 4
    py = (1 - x + y - z) / 4
    pz = (1 - x - y + z) / 4
    table = np.stack([1 - px - py - pz, px, py, pz], axis=1)
    flags = tuple(flags) if flags is not None else ("",) * len(x)
    raw_ok = np.all((table >= -1e-15) & (table <= 1 + 1e-15), axis=1)
    flags = tuple(f if ok else _join(f, "clamped") for f, ok in zip(flags, raw_ok))
    return clamp_renormalize(SingleQubitRates(table, flags))


@dataclass(frozen=True, eq=False)
class ChannelEstimate:
    """Product Pauli channel, one ``(p_id, p_x, p_y, p_z)`` row per qubit."""

    factors: np.ndarray
    flags: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.factors)

    def probability(self, x: int, z: int) -> float:
        out = 1.0
        for q, row in enumerate(self.factors):
            k = ((x >> q) & 1) | (((z >> q) & 1) << 1)  # 0 I, 1 X, 2 Z, 3 Y
            out *= row[(0, 1, 3, 2)[k]]
        return out

    def dense(self) -> np.ndarray:
        """All ``4**n`` probabilities, qubit 0 as the slowest index, I/X/Y/Z order."""
        out = np.ones(1)
        for row in self.factors:
            out = np.kron(out, row)
        return out

    def to_csv_rows(self) -> list[list]:
        flags = self.flags or ("",) * self.n
        return [[q, *(repr(float(v)) for v in row), flags[q]] for q, row in enumerate(self.factors)]


def product_channel(rates: SingleQubitRates) -> ChannelEstimate:
    return ChannelEstimate(np.array(rates.table, dtype=float), tuple(rates.flags))


def _bc(p1, p2) -> float:
    return float(np.sum(np.sqrt(np.asarray(p1, float) * np.asarray(p2, float))))


def bhattacharyya(p1, p2) -> float:
    """``-ln sum sqrt(p1 p2)``; product channels are scored factor by factor.

    Disjoint supports return :data:`DISJOINT_SUPPORT`.
    """
    if isinstance(p1, ChannelEstimate) and isinstance(p2, ChannelEstimate):
        if p1.n != p2.n:
            raise DimensionError("channels on different numbers of qubits")
        total = 0.0
        for r1, r2 in zip(p1.factors, p2.factors):
            d = bhattacharyya(r1, r2)
            if d == DISJOINT_SUPPORT:
                return DISJOINT_SUPPORT
            total += d
        return total
    a, b = np.asarray(p1, float), np.asarray(p2, float)
    if a.shape != b.shape:
        raise DimensionError("distributions have different lengths")
    bc = _bc(a, b)
    if bc <= 0:
        return DISJOINT_SUPPORT
    return max(0.0, -math.log(min(bc, 1.0)))


# --- readout error mitigation ---------------------------------------------------


def transition_matrix(calibration_counts) -> np.ndarray:
    """Column ``j`` = normalized outcome distribution when basis state ``j`` was prepared."""
    T = np.asarray(calibration_counts, dtype=float)
    return T / T.sum(axis=0, keepdims=True)


def rem_correct(observed, transition) -> np.ndarray:
    """Invert the readout transition matrix, then project back onto the simplex."""
    T = np.asarray(transition, dtype=float)
    obs = np.asarray(observed, dtype=float)
    if T.shape != (len(obs), len(obs)):
        raise DimensionError("transition matrix does not match the distribution")
    if np.linalg.cond(T) > COND_LIMIT:
        raise np.linalg.LinAlgError("transition matrix is ill-conditioned")
    v = np.linalg.solve(T, obs)
    v = np.clip(v, 0.0, None)
    s = v.sum()
    if s <= 0:
        raise np.linalg.LinAlgError("correction removed all probability mass")
    return v / s


def flip_transition(k: int, q: float) -> np.ndarray:
    """Transition matrix of independent symmetric flips with rate ``q`` on ``k`` bits."""
    one = np.array([[1 - q, q], [q, 1 - q]])
    out = np.ones((1, 1))
    for _ in range(k):
        out = np.kron(one, out)
    return out


# --- pipeline --------------------------------------------------------------------


def family_elements(code: StabilizerCode) -> dict[str, list[int]]:
    """Element words whose supports give the X, Y and Z systems, in D-row order."""
    if code.m != 6 or code.n != 7:
        raise DimensionError("channel estimation is implemented for the Steane layout only")
    return {
        "X": [a for a in D_ORDER],
        "Z": [a << 3 for a in D_ORDER],
        "Y": [a | (a << 3) for a in D_ORDER],
    }


def estimate_channel_pipeline(element_values, code: StabilizerCode) -> ChannelEstimate:
    """Product channel from element expectations ``element_values[a]``.

    The caller decides the source: raw measured values, calibrated values,
    or exact ones.
    """
    v = np.asarray(element_values, dtype=float)
    fam = family_elements(code)
    blochs = {k: bloch_from_stabilizers(v[idx]) for k, idx in fam.items()}
    flags = tuple(
        "log-floor" if any(blochs[k].clipped[q] for k in "XYZ") else "" for q in range(7))
    rates = rates_from_bloch(blochs["X"].values, blochs["Y"].values, blochs["Z"].values, flags)
    return product_channel(rates)


def channel_from_bloch(x, y, z) -> ChannelEstimate:
    return product_channel(rates_from_bloch(x, y, z))


def reference_channel(circuit) -> ChannelEstimate:
    """Per-qubit marginals of the circuit's true data error, as a product channel."""
    from .sim.spectral import spectral_coefficients

    n = circuit.n_data
    bits = np.array([1 << q for q in range(n)], dtype=np.uint64)
    zero = np.zeros(n, dtype=np.uint64)
    fx = spectral_coefficients(circuit, bits, zero, zero)
    fz = spectral_coefficients(circuit, zero, bits, zero)
    fy = spectral_coefficients(circuit, bits, bits, zero)
    return channel_from_bloch(fx, fy, fz)


@dataclass(frozen=True)
class ChannelComparison:
    lam: float
    db_raw: float
    db_calibrated: float
    raw: ChannelEstimate
    calibrated: ChannelEstimate
    reference: ChannelEstimate


def channel_estimation_experiment(lambdas, circuit=None, noise_kind: str = "depolarizing2",
                                  shots: int | None = None, seed: int = 0) -> list[ChannelComparison]:
    """Raw versus calibrated channel estimates on code-word input.

    The raw estimate feeds the recorded parities straight into the
    pipeline; the calibrated one divides out the outcome-flip factor first.
    ``shots=None`` uses exact values.
    """
    from .calib import empirical_report, spectral_report
    from .channel import NoiseModel
    from .sim.circuit import attach_noise, build_parallel_extraction_steane
    from .sim.sampling import sample_shots
    from .states import CodewordState, element_expectations

    base = circuit if circuit is not None else build_parallel_extraction_steane()
    code = base.code
    state = CodewordState(code)
    E0 = element_expectations(state, code)
    out = []
    for i, lam in enumerate(lambdas):
        noisy = attach_noise(base, (NoiseModel(noise_kind, float(lam)),))
        if shots is None:
            rep = spectral_report(noisy, code)
        else:
            batch = sample_shots(noisy, state, shots, derive_seed(seed, i), rounds=2)
            rep = empirical_report(batch, state, code)
        raw = estimate_channel_pipeline(rep.gamma * E0, code)
        cal = estimate_channel_pipeline(rep.beta, code)
        ref = reference_channel(noisy)
        out.append(ChannelComparison(float(lam), bhattacharyya(raw, ref), bhattacharyya(cal, ref),
                                     raw, cal, ref))
    return out


@dataclass(frozen=True)
class GeneratorRecovery:
    generator: int  # 0-based index into the parent code
    measured: float
    corrected: float
    corrected_se: float
    true: float
    rem: float


def readout_flip_rate(models) -> float:
    """Flip probability a readout calibration of one ancilla bit would see.

    Both ``measflip`` and ``bitflip`` put a flip right before each
    measurement; several models compose.
    """
    q = 0.0
    for mdl in models:
        if mdl.kind in ("measflip", "bitflip"):
            q = q + mdl.value - 2 * q * mdl.value
    return q


def recover_generators(code: StabilizerCode, indices, models, shots: int | None = None,
                       seed: int = 0, state=None) -> list[GeneratorRecovery]:
    """Measure single generators under ``models`` and undo the outcome noise.

    Each generator is extracted on its own (a one-generator code), so the
    recorded parity is one bit.  ``corrected`` applies the calibration
    factor, ``rem`` inverts a flip-only readout matrix (see
    :func:`readout_flip_rate`) and ``true`` is the exact expectation on the
    post-measurement state.  ``shots=None`` is the exact path, with
    ``corrected_se = 0``.
    """
    from .calib import empirical_report, spectral_report
    from .sim.circuit import attach_noise, build_sequential_extraction
    from .sim.sampling import sample_shots
    from .states import ProductState, expectation

    state = state if state is not None else ProductState.zeros(code.n)
    T = flip_transition(1, readout_flip_rate(models))
    out = []
    for j, g in enumerate(indices):
        sub = StabilizerCode((code.generators[g],), name=f"{code.name}-S{g + 1}")
        noisy = attach_noise(build_sequential_extraction(sub), tuple(models))
        ideal = expectation(state, code.generators[g])
        exact = spectral_report(noisy, sub)
        true = float(exact.beta[1] * ideal)
        if shots is None:
            rep = exact
            measured = float(rep.gamma[1] * ideal)
            hist = np.array([1 + measured, 1 - measured]) / 2
            se = 0.0
        else:
            batch = sample_shots(noisy, state, shots, derive_seed(seed, j), rounds=2, code=sub)
            rep = empirical_report(batch, state, sub)
            hist = batch.histogram() / batch.shots
            measured = float(hist[0] - hist[1])
            se = float(rep.beta_se[1] * abs(ideal))
        corrected = float(rep.alpha[1] * measured)
        fixed = rem_correct(hist, T)
        out.append(GeneratorRecovery(g, measured, corrected, se, true, float(fixed[0] - fixed[1])))
    return out
