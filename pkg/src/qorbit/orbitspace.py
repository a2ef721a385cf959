"""Procesi-Schwarz matrices and orbit-space membership in trace coordinates.

For the integrity basis ``t_k = tr(rho^k)`` the gradient matrix is
``Grad_ij = i j t_{i+j-2}`` (1-based, ``t_0 = d``). It equals
``D Disc D`` with ``D = diag(1..d)`` and the Hankel moment matrix
``Disc_ij = t_{i+j-2}``, which in turn is ``V^T V`` for the Vandermonde
matrix ``V`` of the spectrum. Positivity of Disc is the all-real-roots
condition, so on physical states neither matrix is ever indefinite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionError
from .invariants import moments, newton_t_to_S, qutrit_reality

DEFAULT_TOL = 1e-9

POSITIVE_DEFINITE = "positive_definite"
PSD_BOUNDARY = "psd_boundary"
INDEFINITE = "indefinite"

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"
STATUSES = (INSIDE, BOUNDARY, OUTSIDE)

# qutrit triangle A(1/3, 1/9), B(1, 1), C(1/2, 1/4)
VERTEX_A = (1.0 / 3.0, 1.0 / 9.0)
VERTEX_B = (1.0, 1.0)
VERTEX_C = (0.5, 0.25)
LOCATIONS = (
    "interior",
    "edge_AB",
    "edge_AC",
    "edge_BC",
    "vertex_A",
    "vertex_B",
    "vertex_C",
    "outside",
)
CONSTRAINTS = ("reality", "S2_low", "S2_high", "S3_low", "S3_high")


def _hankel_index(d):
    i = np.arange(d)
    return i[:, None] + i[None, :]


def disc_matrix(t) -> np.ndarray:
    """Hankel matrix ``t_{i+j-2}`` of power sums, ``t_0 = d``.

    A batch of points ``(n, d)`` gives an ``(n, d, d)`` stack.
    """
    t = np.asarray(t, dtype=np.float64)
    d = t.shape[-1]
    mom = moments(t, 2 * d - 2)
    return mom[..., _hankel_index(d)]


def grad_matrix(t) -> np.ndarray:
    """Gram matrix of gradients of ``t_1..t_d``: ``i j t_{i+j-2}``."""
    t = np.asarray(t, dtype=np.float64)
    d = t.shape[-1]
    w = np.arange(1, d + 1, dtype=np.float64)
    # row then column scaling, bit-identical to D @ Disc @ D
    return (w[:, None] * disc_matrix(t)) * w


def vandermonde(x) -> np.ndarray:
    """Rows ``(1, x_k, x_k^2, ..., x_k^{d-1})``, one per root; ``Disc = V^T V``."""
    x = np.asarray(x, dtype=np.float64)
    return x[..., :, None] ** np.arange(x.shape[-1])


@dataclass(frozen=True)
class PsdVerdict:
    cls: str
    min_eigenvalue: float
    scale: float

    @property
    def is_psd(self) -> bool:
        return self.cls != INDEFINITE


def psd_classify(m, tol: float = DEFAULT_TOL) -> PsdVerdict:
    """Classify a real symmetric matrix by its smallest eigenvalue.

    The threshold is ``tol * (1 + ||m||_2)``.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    scale0 = 1.0 + float(np.max(np.abs(m), initial=0.0))
    if np.max(np.abs(m - m.T), initial=0.0) > tol * scale0:
        raise ValueError("matrix is not symmetric within tolerance")
    ev = np.linalg.eigvalsh(0.5 * (m + m.T))
    scale = float(max(abs(ev[0]), abs(ev[-1])))
    thr = tol * (1.0 + scale)
    lo = float(ev[0])
    if lo < -thr:
        cls = INDEFINITE
    elif lo <= thr:
        cls = PSD_BOUNDARY
    else:
        cls = POSITIVE_DEFINITE
    return PsdVerdict(cls, lo, scale)


def psd_batch(mats, tol: float = DEFAULT_TOL):
    """Vectorized :func:`psd_classify` on an ``(n, m, m)`` stack.

    Returns ``(codes, min_eigenvalues, scales)`` with codes 0/1/2 for
    positive definite / boundary / indefinite.
    """
    mats = np.asarray(mats, dtype=np.float64)
    lo = kernels.min_eigvalsh(mats)
    hi = -kernels.min_eigvalsh(-mats)
    scale = np.maximum(np.abs(lo), np.abs(hi))
    thr = tol * (1.0 + scale)
    codes = np.where(lo < -thr, 2, np.where(lo <= thr, 1, 0))
    return codes, lo, scale


PSD_CODES = (POSITIVE_DEFINITE, PSD_BOUNDARY, INDEFINITE)


# -- membership --------------------------------------------------------------


@dataclass(frozen=True)
class Membership:
    status: str
    slacks: dict = field(default_factory=dict)
    active: tuple = ()


def _band(tol, scale):
    return tol * (1.0 + np.abs(scale))


def membership(t, normalized: bool = True, tol: float = DEFAULT_TOL) -> Membership:
    """Test whether trace coordinates come from a density matrix.

    The point must have all characteristic coefficients ``S_k >= 0`` and a
    positive semidefinite Disc matrix (equivalently Grad). ``inside`` means
    every condition holds strictly; ``boundary`` that at least one is active.
    """
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 1:
        raise DimensionError("membership takes a single point; see membership_status")
    d = t.shape[0]
    if normalized and abs(t[0] - 1.0) > _band(tol, 1.0):
        raise ValueError(f"normalized point needs t_1 = 1, got {t[0]!r}")
    S = newton_t_to_S(t)
    verdict = psd_classify(disc_matrix(t), tol)
    slacks = {f"S{k + 1}": float(S[k]) for k in range(d)}
    slacks["disc"] = verdict.min_eigenvalue
    bands = [_band(tol, s) for s in S]
    if verdict.cls == INDEFINITE or any(s < -b for s, b in zip(S, bands)):
        status = OUTSIDE
    elif verdict.cls == PSD_BOUNDARY or any(abs(s) <= b for s, b in zip(S, bands)):
        status = BOUNDARY
    else:
        status = INSIDE
    active = tuple(f"S{k + 1}" for k in range(d) if abs(S[k]) <= bands[k])
    if verdict.cls == PSD_BOUNDARY:
        active += ("disc",)
    return Membership(status, slacks, active)


def membership_status(t, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Batched :func:`membership`; returns codes 0/1/2 = inside/boundary/outside."""
    t = np.atleast_2d(np.asarray(t, dtype=np.float64))
    S = newton_t_to_S(t)
    codes, _, _ = psd_batch(disc_matrix(t), tol)
    band = _band(tol, S)
    out = np.zeros(t.shape[0], dtype=np.int64)
    out[(codes == 1) | np.any(np.abs(S) <= band, axis=1)] = 1
    out[(codes == 2) | np.any(S < -band, axis=1)] = 2
    return out


# -- the qutrit triangle -----------------------------------------------------


def curve_AB(t2):
    """Upper discriminant branch: two equal eigenvalues below the third."""
    t2 = np.asarray(t2, dtype=np.float64)
    return (-4.0 + 18.0 * t2 + np.sqrt(2.0) * np.clip(3.0 * t2 - 1.0, 0.0, None) ** 1.5) / 18.0


def curve_AC(t2):
    """Lower discriminant branch: two equal eigenvalues above the third."""
    t2 = np.asarray(t2, dtype=np.float64)
    return (-4.0 + 18.0 * t2 - np.sqrt(2.0) * np.clip(3.0 * t2 - 1.0, 0.0, None) ** 1.5) / 18.0


def line_BC(t2):
    """``det rho = 0``."""
    return 1.5 * np.asarray(t2, dtype=np.float64) - 0.5


def boundary_curves(n: int = 1000) -> dict:
    """Sample the three triangle sides at ``n`` points each, endpoints included."""
    a, b, c = VERTEX_A[0], VERTEX_B[0], VERTEX_C[0]
    ab = np.linspace(a, b, n)
    ac = np.linspace(a, c, n)
    bc = np.linspace(c, b, n)
    return {
        "AB": (ab, curve_AB(ab)),
        "AC": (ac, curve_AC(ac)),
        "BC": (bc, line_BC(bc)),
    }


def qutrit_slacks(t2, t3):
    """Slack and scale of each triangle constraint; arrays broadcast.

    Returns ``{name: (slack, scale)}`` where feasibility is ``slack >= 0``.
    """
    t2 = np.asarray(t2, dtype=np.float64)
    t3 = np.asarray(t3, dtype=np.float64)
    e2 = (1.0 - t2) / 2.0
    e3 = (1.0 - 3.0 * t2 + 2.0 * t3) / 6.0
    reality_scale = (
        3 * np.abs(t2) ** 3
        + 21 * t2**2
        + 36 * np.abs(t3 * t2)
        + 9 * np.abs(t2)
        + 18 * t3**2
        + 8 * np.abs(t3)
        + 1
    ) / 6.0
    e2_scale = (1.0 + np.abs(t2)) / 2.0
    e3_scale = (1.0 + 3.0 * np.abs(t2) + 2.0 * np.abs(t3)) / 6.0
    return {
        "reality": (qutrit_reality(t2, t3), reality_scale),
        "S2_low": (e2, e2_scale),
        "S2_high": (1.0 / 3.0 - e2, e2_scale),
        "S3_low": (e3, e3_scale),
        "S3_high": (1.0 / 27.0 - e3, e3_scale),
    }


@dataclass(frozen=True)
class RegionVerdict:
    location: str
    binding: tuple = ()


def qutrit_region_codes(t2, t3, tol: float = DEFAULT_TOL):
    """Vectorized triangle classification.

    Returns ``(codes, active)`` where ``codes`` index :data:`LOCATIONS` and
    ``active`` maps each constraint name to a boolean array.
    """
    t2, t3 = np.broadcast_arrays(np.asarray(t2, dtype=np.float64), np.asarray(t3, dtype=np.float64))
    slacks = qutrit_slacks(t2, t3)
    active = {}
    violated = np.zeros(t2.shape, dtype=bool)
    for name, (slack, scale) in slacks.items():
        band = _band(tol, scale)
        active[name] = np.abs(slack) <= band
        violated |= slack < -band
    upper = t3 >= (-4.0 + 18.0 * t2) / 18.0
    code = np.zeros(t2.shape, dtype=np.int64)
    # later assignments take precedence: interior < edges < vertices < outside
    code[active["reality"] & upper] = LOCATIONS.index("edge_AB")
    code[active["reality"] & ~upper] = LOCATIONS.index("edge_AC")
    # B-C touches A-B tangentially at B, so near B both bands overlap
    code[active["S3_low"]] = LOCATIONS.index("edge_BC")
    code[active["S3_low"] & active["reality"] & ~upper] = LOCATIONS.index("vertex_C")
    code[active["S2_low"]] = LOCATIONS.index("vertex_B")
    code[active["S2_high"] | active["S3_high"]] = LOCATIONS.index("vertex_A")
    code[violated] = LOCATIONS.index("outside")
    return code, active


def qutrit_region(t2: float, t3: float, tol: float = DEFAULT_TOL) -> RegionVerdict:
    """Locate a unit-trace qutrit point ``(t2, t3)`` on the orbit-space triangle."""
    code, active = qutrit_region_codes(t2, t3, tol)
    binding = tuple(name for name in CONSTRAINTS if bool(active[name]))
    return RegionVerdict(LOCATIONS[int(code)], binding)


def location_status(codes) -> np.ndarray:
    """Map triangle location codes to inside/boundary/outside codes."""
    codes = np.asarray(codes)
    out = np.ones(codes.shape, dtype=np.int64)
    out[codes == 0] = 0
    out[codes == LOCATIONS.index("outside")] = 2
    return out
