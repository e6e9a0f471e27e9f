"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over. ``NDLOMB_BACKEND=python`` forces the fallback,
``NDLOMB_BACKEND=compiled`` makes a missing extension an ImportError.
"""

import os

import numpy as np

from . import _kernels_py

_choice = os.environ.get("NDLOMB_BACKEND", "auto").lower()

_compiled = None
if _choice != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        if _choice == "compiled":
            raise
        _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

DEFAULT = "compiled" if _compiled is not None else "python"


def get(name=None):
    """Kernel module by name; ``None`` means the import-time default."""
    return BACKENDS[name or DEFAULT]


def phase_tables(coords, axis_omegas):
    """Stack per-axis cos/sin tables for the product kernel."""
    rows_c, rows_s, offsets, sizes = [], [], [], []
    offset = 0
    for d, om in enumerate(axis_omegas):
        ph = np.multiply.outer(np.asarray(om, dtype=np.float64), coords[:, d])
        rows_c.append(np.cos(ph))
        rows_s.append(np.sin(ph))
        offsets.append(offset)
        sizes.append(len(om))
        offset += len(om)
    return (
        np.ascontiguousarray(np.vstack(rows_c)),
        np.ascontiguousarray(np.vstack(rows_s)),
        np.asarray(offsets, dtype=np.intp),
        np.asarray(sizes, dtype=np.intp),
    )


def trig_sums(coords, values, omegas=None, axis_omegas=None, threads=1, backend=None):
    """Per-frequency sums (cc, ss, cs, yc, ys), shape (F, 5).

    With ``axis_omegas`` the separable product path is used; otherwise
    ``omegas`` (F, m) is evaluated directly.
    """
    kern = get(backend)
    coords = np.ascontiguousarray(coords, dtype=np.float64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    if axis_omegas is not None:
        tc, ts, off, sz = phase_tables(coords, axis_omegas)
        return kern.product_sums(tc, ts, off, sz, values, int(threads))
    omegas = np.ascontiguousarray(np.atleast_2d(omegas), dtype=np.float64)
    return kern.direct_sums(coords, values, omegas, int(threads))
