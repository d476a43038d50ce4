"""Backend selection for jet evaluation.

The compiled Cython kernel is used when available; otherwise the
pure-Python twin takes over.  ``CURVHOM_BACKEND={compiled,pure}`` forces a
choice (raising if the compiled kernel was requested but is not built).
Both backends produce bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np

from . import pure as _pure
from .tables import jet_tables

try:
    from . import _jetkernel as _compiled
except ImportError:  # extension not built; fall back to the twin
    _compiled = None

_forced = os.environ.get("CURVHOM_BACKEND")
if _forced == "pure":
    ACTIVE = "pure"
elif _forced == "compiled":
    if _compiled is None:
        raise ImportError(
            "CURVHOM_BACKEND=compiled but the _jetkernel extension is not built"
        )
    ACTIVE = "compiled"
elif _forced is None:
    ACTIVE = "compiled" if _compiled is not None else "pure"
else:
    raise ValueError(f"unknown CURVHOM_BACKEND value: {_forced!r}")


def available_backends():
    return ("compiled", "pure") if _compiled is not None else ("pure",)


def backend_name():
    return ACTIVE


def _check(backend):
    backend = ACTIVE if backend is None else backend
    if backend == "pure":
        return backend
    if backend == "compiled" and _compiled is not None:
        return backend
    raise ValueError(f"backend not available: {backend!r}")


def eval_value(program, x, backend=None):
    if _check(backend) == "pure":
        return _pure.eval_value(program, x)
    x = np.ascontiguousarray(x, dtype=np.float64)
    return _compiled.eval_value(program.code, program.consts, x)


def eval_values(program, xs, backend=None):
    if _check(backend) == "pure":
        return _pure.eval_values(program, xs)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    return _compiled.eval_values(program.code, program.consts, xs)


def eval_jet3(program, x, backend=None):
    """Return (value, grad, hess, third) with dense, exactly symmetric
    hess/third obtained by scattering the canonical entries."""
    p = program.p
    tab = jet_tables(p)
    if _check(backend) == "pure":
        v, g, h2, h3 = _pure.eval_jet3(program, x)
    else:
        x = np.ascontiguousarray(x, dtype=np.float64)
        v, g, h2, h3 = _compiled.eval_jet3(
            program.code, program.consts, x,
            tab.I2, tab.J2, tab.I3, tab.J3, tab.K3,
            tab.HIJ, tab.HIK, tab.HJK,
        )
    hess = h2[tab.scatter2].reshape(p, p)
    third = h3[tab.scatter3].reshape(p, p, p)
    return v, g, hess, third
