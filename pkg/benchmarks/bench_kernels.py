"""Compare the compiled and numpy kernel backends on the Steane workloads.

Run with ``python3 benchmarks/bench_kernels.py [--shots N] [--repeat R]``.
Prints the best wall time per backend and the speedup, and checks that
both backends produce identical output.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from syndrocal._kernels import get_backend
from syndrocal.channel import parse_noise
from syndrocal.code import steane
from syndrocal.sim import (attach_noise, build_parallel_extraction_steane, sample_shots,
                           spectral_coefficients)
from syndrocal.states import CodewordState


def _best(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--shots", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    circ = attach_noise(build_parallel_extraction_steane(), parse_noise("depolarizing2:lambda=0.05"))
    state = CodewordState(steane())
    rng = np.random.default_rng(0)
    signal = rng.random((256, 4096))
    els = steane().elements
    qx = np.repeat([s.x for s in els], 64)
    qz = np.repeat([s.z for s in els], 64)
    qb = np.tile(np.arange(64), 64)

    try:
        backends = {"c": get_backend("c"), "python": get_backend("python")}
    except ImportError as exc:
        print(f"compiled backend unavailable ({exc}); timing python only")
        backends = {"python": get_backend("python")}

    workloads = {
        f"frame_sample {args.shots} shots x 2 rounds":
            lambda k: sample_shots(circ, state, args.shots, seed=1, rounds=2, backend=k).y,
        "backprop 4096 spectral queries": lambda k: spectral_coefficients(circ, qx, qz, qb, backend=k),
        "fwht 256 x 4096": lambda k: k.fwht(signal.copy()),
    }
    print(f"{'workload':42s} " + " ".join(f"{n:>10s}" for n in backends) + "    speedup")
    for label, fn in workloads.items():
        res = {}
        for name, kern in backends.items():
            res[name] = _best(lambda: fn(kern), args.repeat)
        outs = [np.asarray(v[1]) for v in res.values()]
        same = all(np.array_equal(outs[0], o) or np.allclose(outs[0], o, atol=1e-12) for o in outs)
        speed = res["python"][0] / res["c"][0] if "c" in res else float("nan")
        cols = " ".join(f"{res[n][0]:9.4f}s" for n in backends)
        print(f"{label:42s} {cols}   {speed:7.1f}x{'' if same else '  OUTPUT MISMATCH'}")


if __name__ == "__main__":
    main()
