"""Noisy syndrome-extraction circuits and the engines that evaluate them."""
from .circuit import (Flip, Gate, Measure, Noise, NoisyCircuit, Reset, attach_noise,
                      build_circuit, build_parallel_extraction_steane,
                      build_sequential_extraction, dump_circuit, parse_circuit, repeat)
from .forward import DEFAULT_CAP, exact_joint_distribution
from .oracle import OracleResult, density_oracle, faulty_measure, faulty_sequence
from .sampling import ShotBatch, ShotRecord, sample_shots
from .spectral import (SpectralQuery, beta_factors, gamma_factors, joint_spectrum,
                       spectral_coefficient, spectral_coefficients)
from .tworound import two_round_from_distribution, two_round_joint

__all__ = [
    "Flip", "Gate", "Measure", "Noise", "NoisyCircuit", "Reset", "attach_noise", "build_circuit",
    "build_parallel_extraction_steane", "build_sequential_extraction", "dump_circuit",
    "parse_circuit", "repeat", "DEFAULT_CAP", "exact_joint_distribution", "OracleResult",
    "density_oracle", "faulty_measure", "faulty_sequence", "ShotBatch", "ShotRecord",
    "sample_shots", "SpectralQuery", "beta_factors", "gamma_factors", "joint_spectrum",
    "spectral_coefficient", "spectral_coefficients", "two_round_from_distribution",
    "two_round_joint",
]
