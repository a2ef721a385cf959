"""Batch kernel dispatch.

The compiled extension is used when it imports; otherwise the numpy
fallback is loaded. Setting ``QORBIT_PURE_PYTHON=1`` forces the fallback.
Both backends are importable directly for comparison, see
:func:`load_backend`.
"""

import importlib
import os

import numpy as np

_NAMES = (
    "power_sums",
    "elementary_from_power_sums",
    "extend_power_sums",
    "min_eigvalsh",
    "casimir_contract",
)


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "cython":
        return importlib.import_module("qorbit._kernels")
    if name == "python":
        return importlib.import_module("qorbit._kernels_py")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("QORBIT_PURE_PYTHON", "") not in ("", "0"):
    _impl = load_backend("python")
else:
    try:
        _impl = load_backend("cython")
    except ImportError:
        _impl = load_backend("python")
_py = load_backend("python")

BACKEND = _impl.BACKEND

#: Largest matrix size sent to the compiled Jacobi solver; batched LAPACK
#: is faster beyond it (see benchmarks/bench_kernels.py).
JACOBI_MAX = 4


def _f64(a, ndim):
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {a.shape}")
    return a


def power_sums(x, kmax):
    """Row-wise power sums ``t_k = sum_i x_i**k`` for ``k = 1..kmax``."""
    return _impl.power_sums(_f64(x, 2), int(kmax))


def elementary_from_power_sums(t):
    """Row-wise Newton identities: power sums ``t_1..t_m`` to ``e_1..e_m``."""
    return _impl.elementary_from_power_sums(_f64(t, 2))


def extend_power_sums(t, e, kmax):
    """Extend ``t_1..t_d`` to ``t_1..t_kmax`` by the Newton recursion."""
    return _impl.extend_power_sums(_f64(t, 2), _f64(e, 2), int(kmax))


def min_eigvalsh(mats):
    """Smallest eigenvalue of each symmetric matrix in an ``(n, m, m)`` stack."""
    mats = _f64(mats, 3)
    if mats.shape[-1] > JACOBI_MAX:
        return _py.min_eigvalsh(mats)
    return _impl.min_eigvalsh(mats)


def casimir_contract(xi, ijk, vals):
    """``(c2, c3, c4)`` rows from Bloch vectors and a sparse d-tensor."""
    ijk = np.ascontiguousarray(ijk, dtype=np.int64)
    return _impl.casimir_contract(_f64(xi, 2), ijk, _f64(vals, 1))
