import numpy as np
import pytest

from syndrocal._kernels import BACKEND_NAME, get_backend
from syndrocal.channel import parse_noise
from syndrocal.code import steane
from syndrocal.random_instances import random_noisy_circuit
from syndrocal.sim import (attach_noise, build_parallel_extraction_steane, sample_shots,
                           spectral_coefficients)
from syndrocal.states import calibration_state

try:
    C = get_backend("c")
except ImportError:  # pragma: no cover
    C = None
PY = get_backend("python")

needs_c = pytest.mark.skipif(C is None, reason="compiled kernels not built")


def test_backend_selection():
    assert BACKEND_NAME in ("c", "python")
    with pytest.raises(ValueError):
        get_backend("fortran")


@needs_c
def test_fwht_identical(rng):
    v = rng.random((5, 256))
    assert np.array_equal(C.fwht(v.copy()), PY.fwht(v.copy()))


@needs_c
def test_sampling_identical():
    c = attach_noise(build_parallel_extraction_steane(),
                     parse_noise("depolarizing2:lambda=0.05+measflip:q=0.01+bitflip:p=0.01"))
    st = calibration_state(7)
    a = sample_shots(c, st, 4000, seed=3, rounds=2, backend=C)
    b = sample_shots(c, st, 4000, seed=3, rounds=2, backend=PY)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)


@needs_c
def test_backprop_identical(rng):
    els = steane().elements
    c = attach_noise(build_parallel_extraction_steane(), parse_noise("depolarizing2:lambda=0.03"))
    qx = np.array([s.x for s in els], dtype=np.uint64)
    qz = np.array([s.z for s in els], dtype=np.uint64)
    qb = rng.integers(0, 64, size=64).astype(np.uint64)
    assert np.allclose(spectral_coefficients(c, qx, qz, qb, backend=C),
                       spectral_coefficients(c, qx, qz, qb, backend=PY), atol=1e-14, rtol=0)
    for _ in range(5):
        r = random_noisy_circuit(rng)
        ones = np.zeros(4, dtype=np.uint64)
        b = np.arange(4, dtype=np.uint64) % np.uint64(1 << r.m)
        assert np.allclose(spectral_coefficients(r, ones, ones, b, backend=C),
                           spectral_coefficients(r, ones, ones, b, backend=PY), atol=1e-14)
