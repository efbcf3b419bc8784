"""Hot-loop kernels with a compiled backend and a numpy fallback.

The compiled module is used when it was built and importable; setting the
environment variable ``SYNDROCAL_PURE_PYTHON=1`` forces the fallback.  Both
backends expose ``fwht``, ``backprop`` and ``frame_sample`` with identical
semantics, and :func:`get_backend` returns either one explicitly (used by the
benchmark and by the backend-equivalence tests).
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

OPCODES = {
    "H": _pykernels.OP_H,
    "S": _pykernels.OP_S,
    "CNOT": _pykernels.OP_CNOT,
    "CZ": _pykernels.OP_CZ,
    "SWAP": _pykernels.OP_SWAP,
    "NOISE": _pykernels.OP_NOISE,
    "MEASURE": _pykernels.OP_MEASURE,
    "RESET": _pykernels.OP_RESET,
    "FLIP": _pykernels.OP_FLIP,
}


def get_backend(name: str = "auto"):
    """Return the kernel module named ``"c"``, ``"python"`` or ``"auto"``."""
    if name == "python":
        return _pykernels
    if name == "c":
        if _ckernels is None:
            raise ImportError("compiled kernels are not available; build with "
                              "`pip install -e . --no-build-isolation`")
        return _ckernels
    if name != "auto":
        raise ValueError(f"unknown backend {name!r}")
    if _ckernels is None or os.environ.get("SYNDROCAL_PURE_PYTHON"):
        return _pykernels
    return _ckernels


backend = get_backend()
BACKEND_NAME = "c" if backend is _ckernels else "python"
