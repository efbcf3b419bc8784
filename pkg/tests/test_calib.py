import numpy as np
import pytest

from syndrocal.calib import (analytic_report, beta_au, coset_coarsened_beta, corrected_expectation,
                             direct_beta_au, empirical_report, estimate_factors, f_functions,
                             h_functions, recover_ideal_distribution, spectral_report,
                             verify_theorem)
from syndrocal.channel import JointErrorDistribution, bit_marginal, parse_noise
from syndrocal.code import steane
from syndrocal.errors import UndefinedFactorError
from syndrocal.f2kit import F2Function, F2Subspace, walsh
from syndrocal.random_instances import random_code, random_joint_distribution, random_product_state
from syndrocal.sim import (attach_noise, build_parallel_extraction_steane, build_sequential_extraction,
                           density_oracle, exact_joint_distribution, sample_shots, two_round_joint)
from syndrocal.states import CodewordState, calibration_state, element_expectations

PARALLEL = build_parallel_extraction_steane()


def _zc(lam):
    return attach_noise(PARALLEL, parse_noise(f"z-control:lambda={lam}"))


def _instance(rng):
    while True:
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, n + 1))
        code = random_code(n, m, rng)
        st = random_product_state(n, rng)
        E0 = element_expectations(st, code)
        if np.min(np.abs(E0)) > 0.05:
            return code, st, E0, random_joint_distribution(n, m, rng)


def test_noiseless_report_is_all_ones(steane_code):
    rep = analytic_report(exact_joint_distribution(PARALLEL), calibration_state(7), steane_code)
    for arr in (rep.gamma, rep.beta, rep.alpha):
        assert np.allclose(arr, 1.0, atol=1e-12)
    assert np.allclose(rep.beta_au[:, 0], 1.0) and np.allclose(rep.beta_au[:, 1:], 0.0, atol=1e-12)


def test_gamma_is_walsh_of_flip_marginal(steane_code):
    P = exact_joint_distribution(_zc(0.1))
    rep = analytic_report(P, calibration_state(7), steane_code)
    assert np.allclose(rep.gamma, walsh(bit_marginal(P)).values, atol=1e-12)
    # z-control: data untouched, so beta = 1 and alpha = 1 / gamma
    assert np.allclose(rep.beta, 1.0, atol=1e-12)
    assert np.allclose(rep.alpha * rep.gamma, 1.0, atol=1e-12)


def test_spectral_report_matches_analytic(steane_code):
    c = attach_noise(build_sequential_extraction(steane_code),
                     parse_noise("bitflip:p=0.02+measflip:q=0.03"))
    a = analytic_report(exact_joint_distribution(c), calibration_state(7), steane_code, False)
    s = spectral_report(c)
    assert s.provenance == "spectral"
    assert np.allclose(a.gamma, s.gamma, atol=1e-12) and np.allclose(a.beta, s.beta, atol=1e-12)


def test_two_round_recovery_against_oracle(rng):
    # beta is the post-measurement attenuation; check it on the density oracle
    code = steane()
    c = attach_noise(build_sequential_extraction(code), parse_noise("depolarizing2:lambda=0.05"))
    st = calibration_state(7)
    rep = spectral_report(c)
    res = density_oracle(c, st)
    E0 = element_expectations(st, code)
    avg = res.average_state()
    post = np.array([np.real(np.trace(M @ avg)) for M in _mats(code)])
    assert np.allclose(post, rep.beta * E0, atol=1e-9)


def _mats(code):
    from syndrocal.sim.oracle import pauli_matrix
    return [pauli_matrix(s) for s in code.elements]


def test_empirical_report_within_standard_errors(steane_code):
    c = attach_noise(PARALLEL, parse_noise("depolarizing2:lambda=0.02"))
    st = calibration_state(7)
    exact = spectral_report(c)
    batch = sample_shots(c, st, 100_000, seed=2, rounds=2)
    rep = empirical_report(batch, st, steane_code)
    assert rep.provenance == "empirical" and rep.shots == 100_000
    z = np.abs(rep.gamma - exact.gamma)[1:] / rep.gamma_se[1:]
    assert np.nanmax(z) < 5
    z = np.abs(rep.beta - exact.beta)[1:] / rep.beta_se[1:]
    assert np.nanmax(z) < 5


def test_flip_resolved_factors_random(rng):
    for _ in range(30):
        code, st, E0, P = _instance(rng)
        q = two_round_joint(P, st, code)
        rep = estimate_factors(q, E0)
        if np.any(np.abs(rep.gamma) < 0.05):
            continue
        bt = beta_au(q, E0, rep.gamma)
        assert np.allclose(bt, direct_beta_au(P, code), atol=1e-9)
        assert np.allclose(bt.sum(axis=1), rep.beta, atol=1e-9)
        f, h = f_functions(q, rep.gamma), h_functions(E0)
        m = code.m
        for a in range(1 << m):
            assert verify_theorem(F2Function(m, f[a]), F2Function(m, bt[a]), F2Function(m, h[a])) < 1e-9


def test_verify_theorem_negative_control(rng):
    code, st, E0, P = _instance(rng)
    q = two_round_joint(P, st, code)
    rep = estimate_factors(q, E0)
    bt = beta_au(q, E0, rep.gamma)
    f, h = f_functions(q, rep.gamma), h_functions(E0)
    m = code.m
    g = bt[0].copy()
    g[0] += 0.01
    assert verify_theorem(F2Function(m, f[0]), F2Function(m, g), F2Function(m, h[0])) > 1e-3


def test_coset_endpoints_and_intermediate(rng):
    for _ in range(10):
        code, st, E0, P = _instance(rng)
        m = code.m
        q = two_round_joint(P, st, code)
        rep = estimate_factors(q, E0)
        bt = direct_beta_au(P, code)
        for a in range(1 << m):
            point = coset_coarsened_beta(a, F2Subspace(m), q, E0, rep.gamma)
            assert all(abs(point[u] - bt[a, u]) < 1e-9 for u in range(1 << m))
            whole = coset_coarsened_beta(a, F2Subspace.full(m), q, E0, rep.gamma)
            assert whole == pytest.approx({0: rep.beta[a]}, abs=1e-9)
            if m >= 2:
                W = F2Subspace(m, (1,))
                co = coset_coarsened_beta(a, W, q, E0, rep.gamma)
                for rep_u, total in co.items():
                    assert total == pytest.approx(bt[a, rep_u] + bt[a, rep_u ^ 1], abs=1e-9)


def test_conditional_expectations_match_oracle(steane_code):
    from syndrocal.calib import conditional_expectations
    from syndrocal.f2kit import convolve
    from syndrocal.states import ideal_syndrome_distribution

    c = attach_noise(build_sequential_extraction(steane_code), parse_noise("z-control:lambda=0.1"))
    st = calibration_state(7)
    P = exact_joint_distribution(c)
    rep = analytic_report(P, st, steane_code)
    p = ideal_syndrome_distribution(st, steane_code)
    pt = convolve(bit_marginal(P), p).values
    res = density_oracle(c, st)
    post = res.post_expectations(steane_code)
    for x in (0, 1, 7, 33):
        assert np.allclose(conditional_expectations(x, p.values, rep.beta_au, pt), post[x], atol=1e-9)


def test_corrections_and_guards():
    rep = estimate_factors(F2Function(2, np.array([1.0, 0, 0, 0])), np.array([1.0, 0.0]))
    assert np.isnan(rep.gamma[1])
    with pytest.raises(UndefinedFactorError):
        corrected_expectation(1, 0.3, rep)
    with pytest.raises(UndefinedFactorError):
        recover_ideal_distribution(np.array([1.0, 0.0]), rep)


def test_recover_ideal_distribution(steane_code):
    P = exact_joint_distribution(_zc(0.05))
    st = calibration_state(7)
    rep = analytic_report(P, st, steane_code, False)
    from syndrocal.f2kit import convolve
    from syndrocal.states import ideal_syndrome_distribution
    p = ideal_syndrome_distribution(st, steane_code)
    measured = walsh(convolve(bit_marginal(P), p)).values
    assert np.allclose(recover_ideal_distribution(measured, rep).values, p.values, atol=1e-12)


def test_codeword_report(steane_code):
    P = JointErrorDistribution.ideal(7, 6)
    rep = analytic_report(P, CodewordState(steane_code), steane_code)
    assert np.allclose(rep.alpha, 1.0)


def test_csv_columns(steane_code):
    rep = analytic_report(exact_joint_distribution(PARALLEL), calibration_state(7), steane_code)
    lines = rep.to_csv(0.1).splitlines()
    assert lines[0] == "lambda,a,gamma,beta,alpha,gamma_se,beta_se,alpha_se,provenance"
    assert len(lines) == 65 and lines[1].startswith("0.1,0,1.0,1.0,1.0,nan,nan,nan,analytic")
