"""Counter-based uniform variates keyed by (seed, shot, stream).

Every draw is a pure function of its key, so shots can be generated in any
order, split across workers, or regenerated individually.  The mixing
function is the SplitMix64 finalizer; the compiled kernels implement the
same arithmetic bit for bit.
"""
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def _mix(z):
    with np.errstate(over="ignore"):
        z = z + GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def seed_key(seed: int) -> np.uint64:
    """Reduce an arbitrary integer seed to the 64-bit key used by the kernels."""
    return _mix(np.uint64(seed & _MASK64))


def keyed_uniforms(key, shots, stream: int) -> np.ndarray:
    """Uniform doubles in [0, 1) for each shot index in ``shots``.

    ``key`` comes from :func:`seed_key`.
    """
    shots = np.asarray(shots, dtype=np.uint64)
    h = _mix(_mix(np.uint64(key) ^ shots) ^ np.uint64(stream))
    return (h >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def derive_seed(seed: int, *path: int) -> int:
    """Child seed for sub-experiment ``path`` (grid point, generator, ...).

    Hashing rather than adding keeps ``(seed, i)`` and ``(seed + 1, i - 1)``
    from sharing a stream.  An empty path returns ``seed`` unchanged.
    """
    out = seed
    for i in path:
        out = int(_mix(seed_key(out) ^ np.uint64(i & _MASK64)))
    return out
