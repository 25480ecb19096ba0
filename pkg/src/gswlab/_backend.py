"""Kernel backend selection.

The compiled extension is used when importable; set ``GSWLAB_PURE_PYTHON=1``
to force the NumPy fallback.  :func:`use` switches at runtime (tests and the
benchmark compare both).
"""
import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # pragma: no cover - depends on build
    _compiled = None

FORWARD, BACKWARD, CENTRAL = _kernels_py.FORWARD, _kernels_py.BACKWARD, _kernels_py.CENTRAL
KINDS = {"forward": FORWARD, "backward": BACKWARD, "central": CENTRAL}

_active = _kernels_py if (_compiled is None or os.environ.get("GSWLAB_PURE_PYTHON")) else _compiled


def available():
    return {"python": True, "compiled": _compiled is not None}


def name():
    return "compiled" if _active is _compiled else "python"


def use(backend):
    """Select ``"compiled"`` or ``"python"`` kernels; returns the previous name."""
    global _active
    prev = name()
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif backend == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return prev


def _scale(kind, h):
    return 0.5 / h if kind == CENTRAL else 1.0 / h


def diff(f, axis, kind, h):
    """Periodic difference along lattice ``axis`` of an array shaped (B, N, N, N, N, ...).

    Complex arrays are differenced through their real view, which is exact
    since the stencil is real-linear.
    """
    kind = KINDS.get(kind, kind)
    shape = f.shape
    cplx = np.iscomplexobj(f)
    flat = np.ascontiguousarray(f, dtype=np.complex128 if cplx else np.float64).reshape(shape[:5] + (-1,))
    if cplx:
        flat = flat.view(np.float64)
    out = np.asarray(_active.diff(flat, axis, kind, _scale(kind, h)))
    if cplx:
        out = out.view(np.complex128)
    return out.reshape(shape)


def dirac(u, kind, h, c0):
    """Quaternion stencil ``c0*d0 u + i d1 u + j d2 u + k d3 u`` on a (N, N, N, N, 4) field."""
    kind = KINDS.get(kind, kind)
    u = np.ascontiguousarray(u, dtype=np.float64)
    return np.asarray(_active.dirac(u, kind, _scale(kind, h), float(c0)))
