"""Orbit space of a four-level system in Casimir coordinates ``(c2, c3, c4)``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .invariants import CasimirPoint, casimirs_d4, s_from_casimirs
from .orbitspace import DEFAULT_TOL, psd_batch, psd_classify
from .state import bloch_encode

CSV_HEADER = ("c2", "c3", "c4", "s2", "s3", "s4", "s_ok", "grad_min_eig", "grad_ok", "ps1", "ps2", "ps3")


def _split(c):
    if isinstance(c, CasimirPoint):
        return tuple(np.float64(v) for v in c)
    c = np.asarray(c, dtype=np.float64)
    return c[..., 0], c[..., 1], c[..., 2]


def grad4(c) -> np.ndarray:
    """Gram matrix of the Casimir gradients, written in the Casimirs themselves.

    A single point gives ``(3, 3)``; an ``(n, 3)`` batch gives ``(n, 3, 3)``.
    """
    c2, c3, c4 = _split(c)
    rows = [
        [4 * c2, 6 * c3, 8 * c4],
        [6 * c3, 9 * c4, 12 * c2 * c3],
        [8 * c4, 12 * c2 * c3, 4 * (c3**2 + 3 * c2 * c4)],
    ]
    out = np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)
    return out


def ps_inequalities(c):
    """Left-hand sides ``(v1, v2, v3)``; the point passes when all are >= 0."""
    c2, c3, c4 = _split(c)
    v1 = c2 + c3**2 + 3 * c2 * c4 + c4
    v2 = c3**2 * (-4 * c2**2 + c2 + c4 - 1) + c4 * (3 * c2**2 + 3 * c2 * c4 + c2 - 4 * c4)
    v3 = -4 * c2**3 * c3**2 + 3 * c2**2 * c4**2 + 6 * c2 * c3**2 * c4 - c3**4 - 4 * c4**3
    if np.ndim(v1) == 0:
        return float(v1), float(v2), float(v3)
    return v1, v2, v3


def positivity_d4(c, tol: float = DEFAULT_TOL):
    """``((S2, S3, S4), ok)`` where ``ok`` means every coefficient is >= -tol."""
    s = s_from_casimirs(c)
    ok = np.all([np.asarray(v) >= -tol for v in s], axis=0)
    return s, (bool(ok) if np.ndim(ok) == 0 else ok)


def casimirs_of_states(rhos) -> np.ndarray:
    """``(n, 3)`` Casimir coordinates of a stack of d=4 states, via Bloch vectors."""
    return casimirs_d4(bloch_encode(rhos))


@dataclass(frozen=True)
class QuditRegionSample:
    c: CasimirPoint
    s: tuple
    s_ok: bool
    grad_min_eig: float
    grad_ok: bool
    ps_values: tuple


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    step: float

    def nodes(self) -> np.ndarray:
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        count = int(np.floor((self.hi - self.lo) / self.step + 1e-9)) + 1
        if count < 1:
            raise ValueError(f"empty axis [{self.lo}, {self.hi}]")
        return self.lo + self.step * np.arange(count)


@dataclass(frozen=True)
class Grid:
    c2: Axis
    c3: Axis
    c4: Axis

    @classmethod
    def default(cls, step: float = 0.01) -> "Grid":
        return cls(Axis(0.0, 1.05, step), Axis(-1.05, 1.05, step), Axis(-0.35, 1.05, step))

    @classmethod
    def single(cls, c2: float, c3: float, c4: float) -> "Grid":
        return cls(Axis(c2, c2, 1.0), Axis(c3, c3, 1.0), Axis(c4, c4, 1.0))

    @property
    def shape(self) -> tuple:
        return tuple(len(a.nodes()) for a in (self.c2, self.c3, self.c4))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def points(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Row-major node coordinates (c4 fastest) for flat indices ``start:stop``."""
        n2, n3, n4 = self.shape
        stop = self.size if stop is None else stop
        idx = np.arange(start, stop)
        i2, rem = np.divmod(idx, n3 * n4)
        i3, i4 = np.divmod(rem, n4)
        return np.stack([self.c2.nodes()[i2], self.c3.nodes()[i3], self.c4.nodes()[i4]], axis=1)


def evaluate(c, tol: float = DEFAULT_TOL) -> dict:
    """All per-node quantities for an ``(n, 3)`` array of Casimir points."""
    c = np.atleast_2d(np.asarray(c, dtype=np.float64))
    s, s_ok = positivity_d4(c, tol)
    codes, lo, _ = psd_batch(grad4(c), tol)
    ps = ps_inequalities(c)
    return {
        "c2": c[:, 0],
        "c3": c[:, 1],
        "c4": c[:, 2],
        "s2": s[0],
        "s3": s[1],
        "s4": s[2],
        "s_ok": np.asarray(s_ok),
        "grad_min_eig": lo,
        "grad_ok": codes != 2,
        "ps1": ps[0],
        "ps2": ps[1],
        "ps3": ps[2],
    }


def scan_chunks(grid: Grid, tol: float = DEFAULT_TOL, chunk: int = 1 << 17) -> Iterator[dict]:
    """Evaluate the grid in row-major order, ``chunk`` nodes at a time."""
    n = grid.size
    for start in range(0, n, chunk):
        yield evaluate(grid.points(start, min(start + chunk, n)), tol)


def region_scan(grid: Grid, tol: float = DEFAULT_TOL) -> Iterator[QuditRegionSample]:
    """One :class:`QuditRegionSample` per grid node, row-major."""
    for cols in scan_chunks(grid, tol):
        for i in range(len(cols["c2"])):
            yield QuditRegionSample(
                c=CasimirPoint(float(cols["c2"][i]), float(cols["c3"][i]), float(cols["c4"][i])),
                s=(float(cols["s2"][i]), float(cols["s3"][i]), float(cols["s4"][i])),
                s_ok=bool(cols["s_ok"][i]),
                grad_min_eig=float(cols["grad_min_eig"][i]),
                grad_ok=bool(cols["grad_ok"][i]),
                ps_values=(float(cols["ps1"][i]), float(cols["ps2"][i]), float(cols["ps3"][i])),
            )


def sample_at(c2: float, c3: float, c4: float, tol: float = DEFAULT_TOL) -> QuditRegionSample:
    """Evaluate one Casimir point with the scalar (LAPACK) PSD test."""
    c = CasimirPoint(c2, c3, c4)
    s, s_ok = positivity_d4(c, tol)
    verdict = psd_classify(grad4(c), tol)
    return QuditRegionSample(c, s, s_ok, verdict.min_eigenvalue, verdict.is_psd, ps_inequalities(c))


@dataclass
class ScanSummary:
    nodes: int = 0
    s_ok: int = 0
    both_ok: int = 0
    trimmed: int = 0
    ps_ok_on_s_ok: int = 0
    ps_grad_mismatch: int = 0

    def update(self, cols: dict, tol: float = DEFAULT_TOL) -> None:
        s_ok = cols["s_ok"]
        g_ok = cols["grad_ok"]
        ps_ok = (cols["ps1"] >= -tol) & (cols["ps2"] >= -tol) & (cols["ps3"] >= -tol)
        self.nodes += len(s_ok)
        self.s_ok += int(np.count_nonzero(s_ok))
        self.both_ok += int(np.count_nonzero(s_ok & g_ok))
        self.trimmed += int(np.count_nonzero(s_ok & ~g_ok))
        self.ps_ok_on_s_ok += int(np.count_nonzero(s_ok & ps_ok))
        self.ps_grad_mismatch += int(np.count_nonzero(ps_ok != g_ok))

    @property
    def mismatch_rate(self) -> float:
        return self.ps_grad_mismatch / self.nodes if self.nodes else 0.0


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return format(float(v), ".17g")


def csv_rows(cols: dict, mask=None) -> Iterator[str]:
    idx = range(len(cols["c2"])) if mask is None else np.flatnonzero(mask)
    data = [cols[name] for name in CSV_HEADER]
    for i in idx:
        yield ",".join(_fmt_cell(col[i]) for col in data)
