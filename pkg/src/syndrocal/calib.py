"""Calibration factors from repeated syndrome measurements.

Notation used below, for a stabilizer element ``S(a)``:

* ``E0(a)``  ideal expectation on the input state,
* ``E1(a)``  parity expectation of the first recorded word,
* ``E2(a)``  parity expectation of the second recorded word,
* ``gamma = E1 / E0`` (outcome flips), ``beta = E2 / E1`` (propagated
  data errors) and ``alpha = beta / gamma`` (the correction factor).

Undefined ratios are stored as NaN and raise :class:`UndefinedFactorError`
when a consumer needs them.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, UndefinedFactorError
from .f2kit import F2Function, F2Subspace, convolve, cosets, inverse_walsh, parity_signs, perp, walsh_array
from .sim.sampling import ShotBatch

GUARD = 1e-6
REPORT_COLUMNS = ("a", "gamma", "beta", "alpha", "gamma_se", "beta_se", "alpha_se", "provenance")


def _signs(m: int) -> np.ndarray:
    """``S[a, x] = (-1)^(a.x)``."""
    return np.stack([parity_signs(m, a) for a in range(1 << m)])


@dataclass(frozen=True, eq=False)
class CalibrationReport:
    """Per-element calibration factors.

    Arrays are indexed by the element word ``a``.  ``beta_au[a, u]`` is the
    flip-resolved factor when it was computed.  Standard errors are NaN for
    analytic reports.
    """

    m: int
    gamma: np.ndarray
    beta: np.ndarray
    alpha: np.ndarray
    provenance: str = "analytic"
    shots: int | None = None
    gamma_se: np.ndarray | None = None
    beta_se: np.ndarray | None = None
    alpha_se: np.ndarray | None = None
    beta_au: np.ndarray | None = field(default=None)
    beta_au_se: np.ndarray | None = field(default=None)

    def to_csv(self, lam: float | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow((["lambda"] if lam is not None else []) + list(REPORT_COLUMNS))
        for row in self.rows(lam):
            w.writerow(row)
        return buf.getvalue()

    def rows(self, lam: float | None = None) -> list[list]:
        nan = np.full(1 << self.m, np.nan)
        ses = [s if s is not None else nan for s in (self.gamma_se, self.beta_se, self.alpha_se)]
        out = []
        for a in range(1 << self.m):
            vals = [_fmt(self.gamma[a]), _fmt(self.beta[a]), _fmt(self.alpha[a])]
            vals += [_fmt(s[a]) for s in ses]
            out.append(([_fmt(lam)] if lam is not None else []) + [a] + vals + [self.provenance])
        return out

    def beta_au_rows(self) -> list[list]:
        if self.beta_au is None:
            return []
        se = self.beta_au_se if self.beta_au_se is not None else np.full_like(self.beta_au, np.nan)
        M = 1 << self.m
        return [[a, u, _fmt(self.beta_au[a, u]), _fmt(se[a, u])] for a in range(M) for u in range(M)]


def _fmt(v) -> str:
    if v is None:
        return ""
    v = float(v)
    if np.isnan(v):
        return "nan"
    # 13 significant digits: exact values such as 1 do not print as 0.999999999999999
    return repr(float(format(v, ".13g")) + 0.0)


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.full(np.shape(num), np.nan)
    ok = np.abs(den) >= GUARD
    out[ok] = np.asarray(num)[ok] / np.asarray(den)[ok]
    return out


def round_expectations(joint: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """``E1(a)``, ``E2(a)`` from a joint law over ``x | y << m``."""
    M = 1 << m
    q = np.asarray(joint, dtype=float).reshape(M, M)  # [y, x]
    return walsh_array(q.sum(axis=0)), walsh_array(q.sum(axis=1))


def estimate_factors(data, ideal: np.ndarray) -> CalibrationReport:
    """gamma, beta, alpha from two-round data.

    Parameters
    ----------
    data : F2Function or ShotBatch
        An exact joint law over ``x | y << m`` (analytic path) or two-round
        shot records (empirical path).
    ideal : array
        ``E0(a)`` for every ``a``.
    """
    ideal = np.asarray(ideal, dtype=float)
    if isinstance(data, ShotBatch):
        return _empirical_factors(data, ideal)
    m = data.m // 2
    if data.m != 2 * m or len(ideal) != 1 << m:
        raise DimensionError("joint law and ideal expectations have incompatible sizes")
    E1, E2 = round_expectations(data.values, m)
    gamma = _ratio(E1, ideal)
    beta = _ratio(E2, E1)
    return CalibrationReport(m, gamma, beta, _ratio(beta, gamma), "analytic")


def _empirical_factors(batch: ShotBatch, ideal: np.ndarray) -> CalibrationReport:
    if batch.y is None:
        raise ValueError("calibration needs two-round records")
    m, N = batch.m, batch.shots
    if len(ideal) != 1 << m:
        raise DimensionError("ideal expectations have the wrong length")
    S = _signs(m)
    cx = batch.histogram()
    cy = np.bincount(batch.y.astype(np.int64), minlength=1 << m)
    cj = batch.joint_histogram().reshape(1 << m, 1 << m)  # [y, x]
    E1 = S @ cx / N
    E2 = S @ cy / N
    # E[s1 s2] = sum_{x,y} (-1)^{a.x + a.y} counts / N
    E12 = np.einsum("ax,yx,ay->a", S, cj, S) / N
    v1, v2, c12 = 1 - E1 ** 2, 1 - E2 ** 2, E12 - E1 * E2
    gamma = _ratio(E1, ideal)
    beta = _ratio(E2, E1)
    alpha = _ratio(beta, gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma_se = np.sqrt(v1 / N) / np.abs(ideal)
        beta_se = np.sqrt(np.maximum(v2 + beta ** 2 * v1 - 2 * beta * c12, 0) / N) / np.abs(E1)
        # alpha = E2 E0 / E1^2
        alpha_se = np.abs(alpha) * np.sqrt(np.maximum(
            v2 / E2 ** 2 + 4 * v1 / E1 ** 2 - 4 * c12 / (E1 * E2), 0) / N)
    for arr in (gamma_se, beta_se, alpha_se):
        arr[~np.isfinite(arr)] = np.nan
    gamma_se[np.isnan(gamma)] = np.nan
    beta_se[np.isnan(beta)] = np.nan
    alpha_se[np.isnan(alpha)] = np.nan
    return CalibrationReport(m, gamma, beta, alpha, "empirical", N, gamma_se, beta_se, alpha_se)


def _defined(value: float, what: str, a: int) -> float:
    if value is None or np.isnan(value):
        raise UndefinedFactorError(f"{what} is undefined for a={a}")
    return float(value)


def corrected_expectation(a: int, measured: float, report: CalibrationReport) -> float:
    """``alpha(a) * measured``."""
    return _defined(report.alpha[a], "alpha", a) * measured


def recover_ideal_distribution(measured: np.ndarray, report: CalibrationReport,
                               threshold: float = GUARD) -> F2Function:
    """Undo the outcome flips: inverse transform of ``measured(a) / gamma(a)``."""
    measured = np.asarray(measured, dtype=float)
    g = report.gamma
    bad = np.nonzero(~(np.abs(g) >= threshold))[0]
    if len(bad):
        raise UndefinedFactorError(f"|gamma| below {threshold} (or undefined) for a={int(bad[0])}")
    return inverse_walsh(F2Function(report.m, measured / g))


# --- flip-resolved factors ------------------------------------------------------


def _joint_law(data, m: int | None = None) -> tuple[np.ndarray, int, int | None]:
    """Joint probabilities as ``q[y, x]`` plus ``m`` and the shot count."""
    if isinstance(data, ShotBatch):
        m = data.m
        return data.joint_histogram().reshape(1 << m, 1 << m) / data.shots, m, data.shots
    m = data.m // 2
    return np.asarray(data.values, dtype=float).reshape(1 << m, 1 << m), m, None


def f_functions(data, gamma: np.ndarray) -> np.ndarray:
    """``f[a, x] = (1/gamma_a) sum_y (-1)^(a.y) q(x, y)``.

    This is the unattenuated expectation of ``S(a)`` after recording ``x``,
    weighted by the probability of recording ``x``.
    """
    q, m, _ = _joint_law(data)
    S = _signs(m)
    raw = S @ q  # [a, x]: sum_y s_a(y) q[y, x]
    g = np.asarray(gamma, dtype=float)
    out = np.full_like(raw, np.nan)
    ok = np.abs(g) >= GUARD
    out[ok] = raw[ok] / g[ok, None]
    return out


def h_functions(expectations: np.ndarray) -> np.ndarray:
    """``h[a, b] = E0(a xor b)``."""
    E = np.asarray(expectations, dtype=float)
    M = len(E)
    idx = np.arange(M)
    return E[idx[:, None] ^ idx[None, :]]


def beta_au(data, expectations: np.ndarray, gamma: np.ndarray | None = None,
            elements=None) -> np.ndarray:
    """Flip-resolved factors ``beta[a, u] = sum_e P(e, u) (-1)^<S(a), e>``.

    Computed per ``a`` as the inverse transform of ``F[f_a] / h_a``.  Rows
    whose ``h_a`` comes within the guard of zero, or whose ``gamma`` is
    undefined, are NaN.  ``elements`` restricts the rows computed.
    """
    q, m, _ = _joint_law(data)
    M = 1 << m
    E = np.asarray(expectations, dtype=float)
    if gamma is None:
        E1 = walsh_array(q.sum(axis=0))
        gamma = _ratio(E1, E)
    f = f_functions(data, gamma)
    h = h_functions(E)
    out = np.full((M, M), np.nan)
    rows = range(M) if elements is None else elements
    for a in rows:
        if np.any(np.abs(h[a]) < GUARD) or np.isnan(f[a]).any():
            continue
        out[a] = walsh_array(walsh_array(f[a]) / h[a]) / M
    return out


def beta_au_se(batch: ShotBatch, expectations: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Shot-noise standard error of :func:`beta_au`, holding gamma fixed.

    ``beta[a, u]`` is linear in the joint frequencies with a fixed weight per
    ``(x, y)`` cell, so its variance follows from the multinomial.
    """
    m = batch.m
    M = 1 << m
    S = _signs(m)
    h = h_functions(expectations)
    q = batch.joint_histogram().reshape(M, M) / batch.shots  # [y, x]
    out = np.full((M, M), np.nan)
    for a in range(M):
        if np.any(np.abs(h[a]) < GUARD) or not abs(gamma[a]) >= GUARD:
            continue
        # beta[a,u] = sum_{x,y} c[u,x,y] q[y,x] with
        # c[u,x,y] = s_a(y)/gamma_a * 2^-m sum_b s_b(u ^ x)/h_a(b)
        kern = (S.T @ (1.0 / h[a])) / M  # kern[t] = 2^-m sum_b s_b(t)/h_a(b)
        idx = np.arange(M)
        for u in range(M):
            c = np.outer(S[a], kern[u ^ idx]) / gamma[a]  # [y, x]
            mean = np.sum(c * q)
            var = np.sum(c * c * q) - mean ** 2
            out[a, u] = np.sqrt(max(var, 0.0) / batch.shots)
    return out


def conditional_expectations(x: int, p: np.ndarray, beta_table: np.ndarray,
                             ptilde: np.ndarray) -> np.ndarray:
    """``<S(a)>`` on the post-measurement state after recording ``x``, all ``a``.

    ``(1/pt(x)) sum_u (-1)^(a.(x^u)) p(x^u) beta[a, u]``.
    """
    pt = float(ptilde[x])
    if not pt > 0:
        raise UndefinedFactorError(f"recorded word {x} has zero probability")
    M = len(p)
    m = M.bit_length() - 1
    u = np.arange(M)
    w = p[x ^ u]  # p(x ^ u)
    S = _signs(m)[:, x ^ u]  # (-1)^(a.(x^u))
    return (S * w[None, :] * beta_table).sum(axis=1) / pt


def conditional_expectation(a: int, x: int, p: F2Function, beta_table: np.ndarray,
                            ptilde: F2Function) -> float:
    pv = p.values if isinstance(p, F2Function) else np.asarray(p)
    pt = ptilde.values if isinstance(ptilde, F2Function) else np.asarray(ptilde)
    return float(conditional_expectations(x, pv, np.asarray(beta_table), pt)[a])


def coset_coarsened_beta(a: int, W: F2Subspace, data, expectations: np.ndarray,
                         gamma: np.ndarray | None = None) -> dict[int, float]:
    """Flip-resolved factor aggregated over the cosets of ``W``.

    Returns ``{representative: sum_{u in [rep]} beta[a, u]}`` computed only
    from coset-level data through the transform restricted to ``W``'s
    orthogonal complement.
    """
    q, m, _ = _joint_law(data)
    if W.m != m:
        raise DimensionError("subspace dimension does not match the syndrome length")
    E = np.asarray(expectations, dtype=float)
    if gamma is None:
        gamma = _ratio(walsh_array(q.sum(axis=0)), E)
    f = f_functions(data, gamma)[a]
    h = h_functions(E)[a]
    if np.isnan(f).any():
        raise UndefinedFactorError(f"gamma undefined for a={a}")
    dual = perp(W).members()
    if np.any(np.abs(h[dual]) < GUARD):
        raise UndefinedFactorError(f"vanishing denominator for a={a}")
    Ff = walsh_array(f)
    scale = 2.0 ** (W.k - m)
    out = {}
    for rep, _members in cosets(W):
        tot = 0.0
        for b in dual:
            sgn = -1.0 if bin(rep & b).count("1") & 1 else 1.0
            tot += sgn * Ff[b] / h[b]
        out[rep] = scale * tot
    return out


def verify_theorem(f: F2Function, g: F2Function, h: F2Function) -> float:
    """Max residual of ``f = g * F^-1[h]``."""
    return float(np.max(np.abs(f.values - convolve(g, inverse_walsh(h)).values)))


# --- analytic helpers ----------------------------------------------------------


def direct_beta_au(P, code) -> np.ndarray:
    """Definition-level ``sum_e P(e,u) (-1)^<S(a),e>`` straight from a joint law."""
    from .channel import _parity

    M = 1 << code.m
    out = np.zeros((M, M))
    u = P.u.astype(np.int64)
    for a, s in enumerate(code.elements):
        w = (P.ex & np.uint64(s.z)) ^ (P.ez & np.uint64(s.x))
        sign = 1.0 - 2.0 * _parity(w)
        out[a] = np.bincount(u, weights=P.p * sign, minlength=M)
    return out


def analytic_report(P, state, code, with_beta_au: bool = True) -> CalibrationReport:
    """Exact report for joint law ``P`` and ``state``, no sampling involved."""
    from .sim.tworound import two_round_joint
    from .states import element_expectations

    q = two_round_joint(P, state, code)
    E0 = element_expectations(state, code)
    rep = estimate_factors(q, E0)
    if not with_beta_au:
        return rep
    bt = beta_au(q, E0, rep.gamma)
    return CalibrationReport(rep.m, rep.gamma, rep.beta, rep.alpha, rep.provenance,
                             beta_au=bt)


def empirical_report(batch: ShotBatch, state, code, with_beta_au: bool = False) -> CalibrationReport:
    from .states import element_expectations

    E0 = element_expectations(state, code)
    rep = estimate_factors(batch, E0)
    if not with_beta_au:
        return rep
    bt = beta_au(batch, E0, rep.gamma)
    se = beta_au_se(batch, E0, rep.gamma)
    return CalibrationReport(rep.m, rep.gamma, rep.beta, rep.alpha, rep.provenance, rep.shots,
                             rep.gamma_se, rep.beta_se, rep.alpha_se, bt, se)


def spectral_report(circuit, code=None, with_beta_au: bool = False) -> CalibrationReport:
    """Factors straight from the spectral engine.

    ``gamma(a) = Lambda(I, a)`` and ``beta(a) = Lambda(S(a), 0)`` hold for any
    input state, so no joint law is formed.  Use this when the support of
    the joint law is too large to enumerate.  ``beta_au[a]`` is the inverse
    transform over ``b`` of ``Lambda(S(a), b)``.
    """
    from .sim.spectral import beta_factors, gamma_factors, joint_spectrum

    code = code or circuit.code
    g = gamma_factors(circuit)
    if with_beta_au:
        lam = joint_spectrum(circuit, code)
        bt = walsh_array(lam) / (1 << code.m)
        b = lam[:, 0].copy()
    else:
        bt, b = None, beta_factors(circuit, code)
    return CalibrationReport(code.m, g, b, _ratio(b, g), "spectral", beta_au=bt)
