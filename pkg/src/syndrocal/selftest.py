"""Cross-checks between the independent engines and the closed-form results.

Each check returns a :class:`CheckResult`; :func:`run_selftest` runs them
all and never raises on a failed comparison, so a broken installation
reports every failing check by name.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass
class SelftestReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail} ({c.seconds:.2f}s)"
                for c in self.checks]


def _parity_sign(w: int) -> float:
    return -1.0 if bin(w).count("1") & 1 else 1.0


def check_engine_triangle(rng, circuits: int = 25, queries: int = 4) -> tuple[bool, str]:
    """Spectral engine, exact joint law and density oracle agree on random circuits."""
    from .random_instances import random_centralizer_element, random_noisy_circuit, random_product_state
    from .sim import SpectralQuery, density_oracle, exact_joint_distribution, spectral_coefficient
    from .sim.oracle import pauli_matrix

    worst = 0.0
    for _ in range(circuits):
        c = random_noisy_circuit(rng)
        st = random_product_state(c.n_data, rng)
        P = exact_joint_distribution(c)
        noisy = density_oracle(c, st)
        clean = density_oracle(c.noiseless(), st)
        for _ in range(queries):
            Q = random_centralizer_element(c.code, rng)
            b = int(rng.integers(1 << c.m))
            sp = spectral_coefficient(c, SpectralQuery(Q, b))
            ch = P.character(Q.x, Q.z, b)
            M = pauli_matrix(Q)

            def signed(res):
                return sum(_parity_sign(b & w) * p * float(np.real(np.trace(M @ r)))
                           for w, (p, r) in res.branches.items())

            # the oracle sees Lambda(Q, b) times the same sum without noise
            worst = max(worst, abs(sp - ch), abs(signed(noisy) - sp * signed(clean)))
    return worst < TOL, f"max deviation {worst:.2e} over {circuits * queries} queries"


def check_flip_resolved(rng, instances: int = 40) -> tuple[bool, str]:
    """Fourier recovery of the flip-resolved factors and its coset endpoints."""
    from .calib import (beta_au, coset_coarsened_beta, direct_beta_au, estimate_factors,
                        f_functions, h_functions, verify_theorem)
    from .f2kit import F2Function, F2Subspace
    from .random_instances import random_code, random_joint_distribution, random_product_state
    from .sim import two_round_joint
    from .states import element_expectations

    worst = 0.0
    done = 0
    while done < instances:
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, n + 1))
        code = random_code(n, m, rng)
        st = random_product_state(n, rng)
        E0 = element_expectations(st, code)
        if np.min(np.abs(E0)) < 0.05:
            continue
        P = random_joint_distribution(n, m, rng)
        q = two_round_joint(P, st, code)
        rep = estimate_factors(q, E0)
        if np.any(np.abs(rep.gamma) < 0.05):
            continue
        done += 1
        bt = beta_au(q, E0, rep.gamma)
        worst = max(worst, float(np.abs(bt - direct_beta_au(P, code)).max()))
        f, h = f_functions(q, rep.gamma), h_functions(E0)
        for a in range(1 << m):
            worst = max(worst, verify_theorem(F2Function(m, f[a]), F2Function(m, bt[a]),
                                              F2Function(m, h[a])))
            point = coset_coarsened_beta(a, F2Subspace(m), q, E0, rep.gamma)
            whole = coset_coarsened_beta(a, F2Subspace.full(m), q, E0, rep.gamma)
            worst = max(worst, max(abs(point[u] - bt[a, u]) for u in range(1 << m)),
                        abs(whole[0] - rep.beta[a]))
    return worst < TOL, f"max deviation {worst:.2e} over {instances} instances"


def check_composition(rng, instances: int = 30) -> tuple[bool, str]:
    """Twisted convolution versus two faulty measurements in a row."""
    from .channel import compose_faulty
    from .random_instances import random_code, random_joint_distribution, random_product_state
    from .sim.oracle import faulty_measure, faulty_sequence, state_matrix

    worst = 0.0
    for _ in range(instances):
        n = int(rng.integers(1, 4))
        mt = int(rng.integers(1, n + 1))
        gens = list(random_code(n, mt, rng).generators)
        ms = int(rng.integers(1, mt + 1))
        first = gens[:ms]
        second = gens[ms:] if ms < mt and rng.random() < 0.5 else first
        P = random_joint_distribution(n, len(first), rng)
        Q = random_joint_distribution(n, len(second), rng)
        rho = state_matrix(random_product_state(n, rng))
        seq = faulty_sequence([(P, first), (Q, second)], rho)
        one = faulty_measure(compose_faulty(Q, P, second), first + second, rho)
        for w in set(seq) | set(one):
            worst = max(worst, float(np.abs(seq.get(w, 0) - one.get(w, 0)).max()))
    return worst < TOL, f"max deviation {worst:.2e} over {instances} instances"


def check_schedule_syndromes(schedule=None) -> tuple[bool, str]:
    """Every single-qubit data error is reported with its true syndrome."""
    from .channel import PauliChannel
    from .sim import build_parallel_extraction_steane, gamma_factors
    from .sim.circuit import Noise

    base = build_parallel_extraction_steane(schedule)
    code = base.code
    bad = []
    for q in range(code.n):
        for x, z, name in ((1, 0, "X"), (0, 1, "Z"), (1, 1, "Y")):
            ch = PauliChannel((q,), {(x, z): 1.0})
            c = type(base)(base.n_qubits, base.n_data, base.m,
                           (Noise(ch),) + base.instructions, code)
            s = code.syndrome(x << q, z << q)
            g = gamma_factors(c)
            want = np.array([_parity_sign(a & s) for a in range(1 << code.m)])
            if np.abs(g - want).max() > TOL:
                bad.append(f"{name}{q + 1}")
    return not bad, "all 21 single-qubit errors" if not bad else f"wrong syndrome for {', '.join(bad)}"


def check_z_control_closed_form(schedule=None) -> tuple[bool, str]:
    from .channel import bit_marginal, parse_noise
    from .decode import no_flip_probability
    from .sim import attach_noise, build_parallel_extraction_steane, exact_joint_distribution

    base = build_parallel_extraction_steane(schedule)
    worst = 0.0
    for lam in (0.01, 0.05, 0.1, 0.2, 0.3):
        P = exact_joint_distribution(attach_noise(base, parse_noise(f"z-control:lambda={lam}")))
        worst = max(worst, abs(bit_marginal(P).values[0] - no_flip_probability(lam)))
    return worst < TOL, f"max deviation {worst:.2e}"


def check_depolarizing_exponents(schedule=None) -> tuple[bool, str]:
    from .channel import parse_noise
    from .sim import attach_noise, beta_factors, build_parallel_extraction_steane, gamma_factors
    from .sim.spectral import fit_exponents
    from .sim.steane_schedule import BETA_EXPONENTS, GAMMA_EXPONENTS, external_index

    base = build_parallel_extraction_steane(schedule)
    lams = (0.01, 0.02, 0.05, 0.1, 0.2)
    g, b = [], []
    for lam in lams:
        c = attach_noise(base, parse_noise(f"depolarizing2:lambda={lam}"))
        g.append(gamma_factors(c))
        b.append(beta_factors(c))
    kg, rg = fit_exponents(np.array(g), lams)
    kb, rb = fit_exponents(np.array(b), lams)
    order = [external_index(a) for a in range(64)]
    ok_g = sum(int(kg[a] == GAMMA_EXPONENTS[order[a]]) for a in range(64))
    ok_b = sum(int(kb[a] == BETA_EXPONENTS[order[a]]) for a in range(64))
    resid = max(rg.max(), rb.max())
    passed = resid < TOL and ok_g == 64 and ok_b == 64
    return passed, f"gamma {ok_g}/64, beta {ok_b}/64 exponents match, fit residual {resid:.1e}"


def run_selftest(seed: int = 0, schedule=None, quick: bool = False) -> SelftestReport:
    """Run every check; ``schedule`` swaps in another parallel gate table."""
    rng = np.random.default_rng(seed)
    scale = 0.4 if quick else 1.0
    checks = [
        ("engine-triangle", lambda: check_engine_triangle(rng, circuits=max(5, int(25 * scale)))),
        ("flip-resolved-recovery", lambda: check_flip_resolved(rng, instances=max(10, int(40 * scale)))),
        ("composition-law", lambda: check_composition(rng, instances=max(10, int(30 * scale)))),
        ("parallel-schedule-syndromes", lambda: check_schedule_syndromes(schedule)),
        ("z-control-closed-form", lambda: check_z_control_closed_form(schedule)),
        ("depolarizing-exponents", lambda: check_depolarizing_exponents(schedule)),
    ]
    report = SelftestReport()
    for name, fn in checks:
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not an aborted run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.checks.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t))
    return report
