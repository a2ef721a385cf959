"""Trace invariants and the coordinate changes between them.

All functions accept a single point (1-d array) or a batch (2-d array, one
point per row) and return the same leading shape.
"""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import DimensionError
from .state import LieBasis, eigenvalues_desc, su_basis


class CasimirPoint(NamedTuple):
    c2: float
    c3: float
    c4: float


def _rows(a):
    a = np.asarray(a, dtype=np.float64)
    single = a.ndim == 1
    return (a[None, :] if single else a), single


def _unrows(a, single):
    return a[0] if single else a


def power_sums(x, kmax: int) -> np.ndarray:
    """``sum_i x_i**k`` for ``k = 1..kmax``."""
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    x, single = _rows(x)
    return _unrows(kernels.power_sums(x, kmax), single)


def trace_invariants(rho, kmax: int | None = None) -> np.ndarray:
    """``(tr rho, tr rho^2, ..., tr rho^kmax)`` from the eigenvalue spectrum."""
    rho = np.asarray(rho)
    kmax = rho.shape[-1] if kmax is None else kmax
    x = eigenvalues_desc(rho)
    if x.ndim == 1:
        return power_sums(x, kmax)
    return power_sums(x.reshape(-1, x.shape[-1]), kmax).reshape(*x.shape[:-1], kmax)


def newton_t_to_S(t) -> np.ndarray:
    """Characteristic coefficients ``S_1..S_d`` from power sums ``t_1..t_d``."""
    t, single = _rows(t)
    return _unrows(kernels.elementary_from_power_sums(t), single)


def newton_S_to_t(S) -> np.ndarray:
    """Inverse of :func:`newton_t_to_S`."""
    S, single = _rows(S)
    n, d = S.shape
    t = np.empty((n, d))
    for k in range(1, d + 1):
        acc = (-1.0) ** (k - 1) * k * S[:, k - 1]
        for i in range(1, k):
            acc = acc + (-1.0) ** (i - 1) * S[:, i - 1] * t[:, k - i - 1]
        t[:, k - 1] = acc
    return _unrows(t, single)


def extend_traces(t, kmax: int) -> np.ndarray:
    """Power sums ``t_{d+1}..t_kmax`` implied by ``t_1..t_d``."""
    t, single = _rows(t)
    d = t.shape[1]
    if kmax <= d:
        raise ValueError(f"kmax must exceed d={d}")
    S = kernels.elementary_from_power_sums(t)
    full = kernels.extend_power_sums(t, S, kmax)
    return _unrows(full[:, d:], single)


def moments(t, kmax: int) -> np.ndarray:
    """``(t_0, t_1, ..., t_kmax)`` with ``t_0 = d``, extending past ``d`` as needed."""
    t, single = _rows(t)
    n, d = t.shape
    out = np.empty((n, kmax + 1))
    out[:, 0] = d
    m = min(d, kmax)
    out[:, 1 : m + 1] = t[:, :m]
    if kmax > d:
        out[:, d + 1 :] = extend_traces(t, kmax)
    return _unrows(out, single)


def discriminant(x) -> float | np.ndarray:
    """``prod_{i<j} (x_i - x_j)**2``."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[-1]
    out = np.ones(x.shape[:-1])
    for i, j in combinations(range(d), 2):
        out = out * (x[..., i] - x[..., j]) ** 2
    return out[()] if out.ndim == 0 else out


def qutrit_reality(t2, t3):
    """Discriminant of a unit-trace qutrit written in ``(t2, t3)``."""
    t2 = np.asarray(t2, dtype=np.float64)
    t3 = np.asarray(t3, dtype=np.float64)
    return (3 * t2**3 - 21 * t2**2 + 36 * t3 * t2 + 9 * t2 - 18 * t3**2 - 8 * t3 - 1) / 6.0


def casimirs_d4(xi, basis: LieBasis | None = None):
    """Casimir scalars ``(c2, c3, c4)`` of a d=4 Bloch vector.

    ``c2 = xi.xi``, ``c3 = sqrt(3/2) d_ijk xi_i xi_j xi_k`` and
    ``c4 = (3/2) d_ijk d_lmk xi_i xi_j xi_l xi_m``. A batch of Bloch vectors
    gives an ``(n, 3)`` array instead of a :class:`CasimirPoint`.
    """
    basis = su_basis(4) if basis is None else basis
    if basis.dim != 4:
        raise DimensionError("Casimir scalars are defined here for d = 4 only")
    xi, single = _rows(xi)
    if xi.shape[1] != 15:
        raise DimensionError(f"d=4 Bloch vectors have 15 entries, got {xi.shape[1]}")
    ijk, vals = basis.sparse_d()
    out = kernels.casimir_contract(xi, ijk, vals)
    if single:
        return CasimirPoint(*(float(v) for v in out[0]))
    return out


def s_from_casimirs(c) -> tuple:
    """``(S2, S3, S4)`` of a unit-trace d=4 state in Casimir coordinates."""
    c2, c3, c4 = (np.asarray(v, dtype=np.float64) for v in _split3(c))
    s2 = 3.0 / 8.0 * (1.0 - c2)
    s3 = (1.0 - 3.0 * c2 + 2.0 * c3) / 16.0
    s4 = ((1.0 - 3.0 * c2) ** 2 + 8.0 * c3 - 12.0 * c4) / 256.0
    if s2.ndim == 0:
        return float(s2), float(s3), float(s4)
    return s2, s3, s4


def _split3(c):
    if isinstance(c, CasimirPoint):
        return c
    c = np.asarray(c, dtype=np.float64)
    return c[..., 0], c[..., 1], c[..., 2]
