"""Table decoding from the recorded syndrome versus from the calibrated posterior."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels.rng import derive_seed
from .code import DecodeTable, StabilizerCode, decode_table, steane
from .f2kit import F2Function, inverse_walsh
from .pauli import PauliOperator


@dataclass(frozen=True, eq=False)
class DecodeDecision:
    observed: int
    chosen: int
    correction: PauliOperator
    posterior: F2Function | None
    mode: str
    clipped_mass: float = 0.0

    @property
    def is_identity(self) -> bool:
        return self.correction.x == 0 and self.correction.z == 0


def standard_decode(x: int, table: DecodeTable) -> DecodeDecision:
    return DecodeDecision(x, x, table[x], None, "standard")


def calibrated_decode(x: int, cond, table: DecodeTable) -> DecodeDecision:
    """Correct for the most likely true syndrome given the recorded word ``x``.

    ``cond[a]`` is the calibrated expectation of ``S(a)`` after recording
    ``x``.  Tiny negative posterior entries from rounding are clipped and the
    removed mass is reported; ties go to the smallest syndrome word.
    """
    cond = np.asarray(cond, dtype=float)
    m = len(cond).bit_length() - 1
    if abs(cond[0] - 1.0) > 1e-9:
        raise ValueError(f"cond[0] must be 1, got {cond[0]!r}")
    post = inverse_walsh(F2Function(m, cond)).values
    clipped = float(-post[post < 0].sum())
    post = np.clip(post, 0.0, None)
    total = post.sum()
    if total <= 0:
        raise ValueError("posterior has no positive mass")
    post = post / total
    xi = int(np.argmax(post))  # first maximum = smallest word
    return DecodeDecision(x, xi, table[xi], F2Function(m, post), "calibrated", clipped)


def no_flip_probability(lam: float) -> float:
    """Closed-form probability that no outcome of the parallel circuit flips
    under Z-on-control noise of strength ``lam``."""
    l = lam  # noqa: E741
    return ((l - 1) ** 4 * (8 * l ** 4 - 16 * l ** 3 + 12 * l ** 2 - 4 * l + 1) ** 2
            * (16 * l ** 4 - 24 * l ** 3 + 16 * l ** 2 - 4 * l + 1) ** 4)


@dataclass(frozen=True)
class DisagreementRecord:
    lam: float
    shots: int
    standard_wrong_rate: float
    standard_wrong_rate_se: float
    calibrated_wrong_rate: float
    closed_form_target: float
    exact_target: float


def decisions_for_all_words(code: StabilizerCode, p: np.ndarray, beta_table: np.ndarray,
                            ptilde: np.ndarray, table: DecodeTable) -> dict[int, DecodeDecision]:
    """Calibrated decision for every recordable word (``ptilde > 0``)."""
    from .calib import conditional_expectations

    out = {}
    for x in range(1 << code.m):
        if ptilde[x] > 0:
            cond = conditional_expectations(x, p, beta_table, ptilde)
            out[x] = calibrated_decode(x, cond, table)
    return out


def disagreement_experiment(lambdas, shots: int, seed: int, circuit=None, state=None,
                            noise_kind: str = "z-control") -> list[DisagreementRecord]:
    """Wrong-correction rates of both decoders.

    For each ``lam`` the calibration is computed exactly by the spectral
    engine, then ``shots``
    single-round records are sampled from the noisy circuit (default: the
    parallel Steane circuit with code-word input).  A correction counts as
    wrong when it is not the identity, since the input carries no error.
    ``closed_form_target`` is only defined for Z-on-control noise on the
    default circuit and is NaN otherwise.
    """
    from .calib import spectral_report
    from .channel import NoiseModel
    from .f2kit import walsh_array
    from .sim.circuit import attach_noise, build_parallel_extraction_steane
    from .sim.sampling import sample_shots
    from .states import CodewordState, element_expectations, ideal_syndrome_distribution

    default = build_parallel_extraction_steane()
    base = circuit if circuit is not None else default
    closed = noise_kind == "z-control" and base == default
    code = base.code or steane()
    state = state if state is not None else CodewordState(code)
    table = decode_table(code)
    p = ideal_syndrome_distribution(state, code).values
    E0 = element_expectations(state, code)
    M = 1 << code.m
    out = []
    for i, lam in enumerate(lambdas):
        noisy = attach_noise(base, (NoiseModel(noise_kind, float(lam)),))
        rep = spectral_report(noisy, code, with_beta_au=True)
        # recorded-word law: inverse transform of the attenuated expectations
        pt = walsh_array(rep.gamma * E0) / M
        pt[pt < 1e-15] = 0.0  # rounding residue on unreachable words
        dec = decisions_for_all_words(code, p, rep.beta_au, pt, table)
        batch = sample_shots(noisy, state, shots, derive_seed(seed, i), rounds=1)
        words = batch.x.astype(np.int64)
        std_wrong = np.array([not table[x].x == table[x].z == 0 for x in range(1 << code.m)])
        cal_wrong = np.array([x in dec and not dec[x].is_identity for x in range(1 << code.m)])
        rate = float(std_wrong[words].mean())
        out.append(DisagreementRecord(
            lam=float(lam), shots=shots, standard_wrong_rate=rate,
            standard_wrong_rate_se=float(np.sqrt(rate * (1 - rate) / shots)),
            calibrated_wrong_rate=float(cal_wrong[words].mean()),
            closed_form_target=1.0 - no_flip_probability(lam) if closed else float("nan"),
            exact_target=float(np.dot(pt, std_wrong)),
        ))
    return out
