"""Qutrit orbit types from the tangent-space Gram matrix.

The orbit through ``rho`` is spanned by ``l_i = i[lambda_i, rho]`` and its
dimension is the rank of ``A_ij = tr(l_i l_j) / 2``. The rank is 6, 4 or 0
according to whether the spectrum is simple, has one double eigenvalue, or
is triply degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidStateError, StratumConsistencyError
from .invariants import trace_invariants
from .orbitspace import qutrit_region
from .state import LieBasis, bloch_decode, eigenvalues_desc, su_basis, validate

RANK_TOL = 1e-8

CARTAN = "U(1)⊗U(1)⊗U(1)"
U2U1 = "U(2)⊗U(1)"
U3 = "U(3)"

#: orbit dimension for each eigenvalue multiplicity pattern
ORBIT_TYPES = {
    (1, 1, 1): (6, CARTAN),
    (2, 1): (4, U2U1),
    (3,): (0, U3),
}


@dataclass(frozen=True, eq=False)
class TangentGram:
    entries: np.ndarray
    rank: int


def _rank(a: np.ndarray, tol: float = RANK_TOL) -> int:
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol * (1.0 + sv[0])))


def _qutrit_basis(basis):
    basis = su_basis(3) if basis is None else basis
    if basis.dim != 3:
        raise DimensionError("the tangent Gram matrix is implemented for qutrits")
    return basis


def tangent_gram_direct(rho, basis: LieBasis | None = None) -> TangentGram:
    basis = _qutrit_basis(basis)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (3, 3):
        raise DimensionError(f"expected a 3x3 matrix, got shape {rho.shape}")
    lam = basis.generators
    tangents = 1j * (lam @ rho - rho @ lam)
    a = 0.5 * np.einsum("iab,jba->ij", tangents, tangents).real
    return TangentGram(a, _rank(a))


def tangent_gram_bloch(xi, basis: LieBasis | None = None) -> TangentGram:
    """Same matrix as :func:`tangent_gram_direct`, as ``(4/3) f_ims f_jns xi_m xi_n``."""
    basis = _qutrit_basis(basis)
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (8,):
        raise DimensionError(f"qutrit Bloch vectors have 8 entries, got shape {xi.shape}")
    fx = np.einsum("ims,m->is", basis.f_tensor, xi)
    a = 4.0 / 3.0 * fx @ fx.T
    return TangentGram(a, _rank(a))


def gram_diag_closed_form(xi3: float, xi8: float) -> np.ndarray:
    """Diagonal of the Gram matrix for a diagonal Bloch vector ``(xi3, xi8)``."""
    p = (xi3 + np.sqrt(3.0) * xi8) ** 2
    m = (xi3 - np.sqrt(3.0) * xi8) ** 2
    return np.array([4 * xi3**2, 4 * xi3**2, 0.0, p, p, m, m, 0.0]) / 3.0


def gap_band(x, rank_tol: float = RANK_TOL) -> float:
    """Eigenvalue gap below which two levels count as one.

    The Gram eigenvalues are the squared gaps ``(x_i - x_j)**2``, so a gap is
    resolved exactly when its square clears the Gram rank threshold.
    """
    x = np.asarray(x, dtype=np.float64)
    spread = float(x.max() - x.min())
    return float(np.sqrt(rank_tol * (1.0 + spread**2)))


def _band(x, tol):
    return gap_band(x) if tol is None else tol * (1.0 + abs(float(x[0])))


def multiplicities(x, tol: float | None = None) -> tuple:
    """Multiplicity pattern of a descending spectrum, largest cluster first.

    Neighbouring eigenvalues closer than the band are merged; the band is
    :func:`gap_band` by default, or ``tol * (1 + x[0])`` when ``tol`` is given.
    """
    x = np.asarray(x, dtype=np.float64)
    band = _band(x, tol)
    sizes = [1]
    for a, b in zip(x[:-1], x[1:]):
        if a - b <= band:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return tuple(sorted(sizes, reverse=True))


def clustered_spectrum(x, tol: float | None = None) -> np.ndarray:
    """Descending spectrum with each near-degenerate cluster replaced by its mean."""
    x = np.asarray(x, dtype=np.float64)
    band = _band(x, tol)
    out = x.copy()
    start = 0
    for i in range(1, len(x) + 1):
        if i == len(x) or x[i - 1] - x[i] > band:
            out[start:i] = x[start:i].mean()
            start = i
    return out


@dataclass(frozen=True)
class StratumLabel:
    orbit_dim: int
    stability_group: str
    location: str


def stratum_classify(
    rho, basis: LieBasis | None = None, tol: float = 1e-9, gap_tol: float | None = None
) -> StratumLabel:
    """Orbit dimension, stability group and triangle location of a qutrit state.

    ``gap_tol`` overrides the multiplicity band (see :func:`multiplicities`).
    Raises :class:`StratumConsistencyError` when the Gram rank and the
    eigenvalue multiplicities point to different orbit types.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (3, 3):
        raise DimensionError(f"expected a 3x3 matrix, got shape {rho.shape}")
    report = validate(rho, tol)
    if not report.physical:
        raise InvalidStateError(f"not a physical qutrit state: {report}")
    x = eigenvalues_desc(rho)
    pattern = multiplicities(x, gap_tol)
    dim, group = ORBIT_TYPES[pattern]
    rank = tangent_gram_direct(rho, basis).rank
    if rank != dim:
        raise StratumConsistencyError(
            f"Gram rank {rank} but multiplicities {pattern} imply dimension {dim}"
        )
    t = trace_invariants(np.diag(clustered_spectrum(x, gap_tol)), 3)
    region = qutrit_region(t[1], t[2], tol)
    return StratumLabel(dim, group, region.location)


def diagonal_state(xi3: float = 0.0, xi8: float = 0.0) -> np.ndarray:
    """Unit-trace qutrit with Bloch vector ``xi3 lambda_3 + xi8 lambda_8``."""
    xi = np.zeros(8)
    xi[2], xi[7] = xi3, xi8
    return bloch_decode(3, xi)
