import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from syndrocal.errors import DimensionError, DistributionError
from syndrocal.f2kit import (F2Function, F2Subspace, convolve, cosets, dot, inverse_walsh, perp,
                             rank, walsh)


def brute_walsh(values):
    M = len(values)
    return np.array([sum((-1) ** bin(a & x).count("1") * values[a] for a in range(M))
                     for x in range(M)])


def brute_convolve(f, g):
    M = len(f)
    return np.array([sum(f[b] * g[a ^ b] for b in range(M)) for a in range(M)])


def vectors(m_max=5):
    return st.integers(1, m_max).flatmap(
        lambda m: st.lists(st.floats(-2, 2, allow_nan=False), min_size=1 << m, max_size=1 << m)
        .map(lambda v: F2Function(m, np.array(v))))


def test_walsh_small_cases():
    assert np.allclose(walsh(F2Function(1, [1, 0])).values, [1, 1])
    assert np.allclose(walsh(F2Function(1, [0.5, 0.5])).values, [1, 0])


def test_inverse_walsh_examples():
    assert np.allclose(inverse_walsh(F2Function(2, np.ones(4))).values, [1, 0, 0, 0])
    q = 0.13
    assert np.allclose(inverse_walsh(F2Function(1, [1, 1 - 2 * q])).values, [1 - q, q])


def test_walsh_matches_double_sum(rng):
    f = rng.normal(size=16)
    assert np.allclose(walsh(F2Function(4, f)).values, brute_walsh(f), atol=1e-12)


@given(vectors(8))
def test_walsh_is_involution_up_to_scale(f):
    assert np.allclose(walsh(walsh(f)).values, (1 << f.m) * f.values, atol=1e-9)
    assert np.allclose(inverse_walsh(walsh(f)).values, f.values, atol=1e-12)


@given(vectors(5), st.floats(-3, 3), st.floats(-3, 3))
def test_walsh_is_linear(f, s, t):
    g = F2Function(f.m, np.roll(f.values, 1))
    lhs = walsh(f * s + g * t).values
    rhs = s * walsh(f).values + t * walsh(g).values
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_convolve_against_double_sum(rng):
    f, g = rng.random(8), rng.random(8)
    c = convolve(F2Function(3, f), F2Function(3, g))
    assert np.allclose(c.values, brute_convolve(f, g), atol=1e-12)
    assert np.allclose(walsh(c).values, walsh(F2Function(3, f)).values * walsh(F2Function(3, g)).values,
                       atol=1e-10)


def test_convolve_units_and_uniform(rng):
    f = F2Function(3, rng.random(8))
    assert convolve(f, F2Function.delta(3)).allclose(f)
    u = F2Function.uniform(2)
    assert convolve(u, u).allclose(u)


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(*[st.lists(st.floats(-1, 1), min_size=1 << m,
                                                                  max_size=1 << m)] * 3)))
def test_convolve_commutative_associative(vals):
    m = len(vals[0]).bit_length() - 1
    f, g, h = (F2Function(m, np.array(v)) for v in vals)
    assert np.allclose(convolve(f, g).values, convolve(g, f).values, atol=1e-10)
    assert np.allclose(convolve(convolve(f, g), h).values, convolve(f, convolve(g, h)).values,
                       atol=1e-10)


def test_convolve_dimension_mismatch():
    with pytest.raises(DimensionError):
        convolve(F2Function.delta(2), F2Function.delta(3))


def test_function_validation():
    with pytest.raises(DimensionError):
        F2Function(2, [1, 0, 0])
    with pytest.raises(DimensionError):
        F2Function(17, np.zeros(4))
    with pytest.raises(DistributionError):
        F2Function(1, [0.7, 0.7]).require_distribution()
    with pytest.raises(DistributionError):
        F2Function(1, [1.1, -0.1]).require_distribution()


def test_dot():
    assert dot(0b101, 0b100) == 1
    assert dot(0b101, 0b101) == 0


def test_cosets_examples():
    assert [r for r, _ in cosets(F2Subspace.full(3))] == [0]
    assert len(cosets(F2Subspace(3))) == 8
    cs = cosets(F2Subspace.span(3, [0b001, 0b010]))
    assert cs == [(0, [0, 1, 2, 3]), (4, [4, 5, 6, 7])]


@given(st.integers(1, 6).flatmap(lambda m: st.tuples(st.just(m), st.lists(st.integers(0, (1 << m) - 1),
                                                                          max_size=m))))
def test_cosets_partition_and_perp(args):
    m, words = args
    W = F2Subspace.span(m, words)
    seen = sorted(x for _, mem in cosets(W) for x in mem)
    assert seen == list(range(1 << m))
    assert all(rep == min(mem) and len(mem) == 1 << W.k for rep, mem in cosets(W))
    P = perp(W)
    assert W.k + P.k == m
    assert all(dot(a, b) == 0 for a in W.basis for b in P.basis)


def test_perp_examples():
    assert perp(F2Subspace(4)).k == 4
    assert perp(F2Subspace.span(2, [0b11])).members() == [0, 3]


def test_subspace_rejects_dependent_basis():
    with pytest.raises(ValueError):
        F2Subspace(3, (1, 2, 3))
    assert rank([1, 2, 3]) == 2
