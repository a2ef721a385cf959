"""Density matrices, random states, su(d) bases and Bloch coordinates."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import DimensionError, MatrixFormatError, NotHermitianError

DEFAULT_TOL = 1e-9

#: Number of samples drawn from one derived random stream in batch sampling.
STREAM_BLOCK = 1024


@dataclass(frozen=True)
class ValidityReport:
    hermitian: bool
    unit_trace: bool
    psd: bool
    min_eigenvalue: float
    rank: int

    @property
    def physical(self) -> bool:
        return self.hermitian and self.unit_trace and self.psd


def _square(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def validate(m, tol: float = DEFAULT_TOL) -> ValidityReport:
    """Check Hermiticity, unit trace and positivity independently.

    Eigenvalues are taken from the Hermitian part, so ``psd`` and ``rank``
    are still reported for matrices that fail the Hermiticity check.
    """
    m = _square(m)
    if m.shape[0] < 2:
        raise DimensionError("density matrices need d >= 2")
    scale = float(np.linalg.norm(m, 2))
    hermitian = bool(np.max(np.abs(m - m.conj().T)) <= tol * (1.0 + scale))
    tr = np.trace(m)
    unit_trace = bool(abs(tr.real - 1.0) <= tol * 2.0 and abs(tr.imag) <= tol * 2.0)
    evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    min_eig = float(evals[0])
    psd = min_eig >= -tol * (1.0 + scale)
    rank = int(np.count_nonzero(evals > tol * (1.0 + float(evals[-1]))))
    return ValidityReport(hermitian, unit_trace, bool(psd), min_eig, rank)


def _check_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    scale = 1.0 + float(np.max(np.abs(m), initial=0.0))
    if np.max(np.abs(m - np.swapaxes(m, -1, -2).conj()), initial=0.0) > tol * scale * m.shape[-1]:
        raise NotHermitianError("matrix is not Hermitian within tolerance")


def eigenvalues_desc(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Real spectrum sorted in descending order.

    Accepts a single matrix or a stack ``(..., d, d)``.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"expected square matrices, got shape {m.shape}")
    _check_hermitian(m, tol)
    return np.linalg.eigvalsh(m)[..., ::-1].copy()


# -- random states -----------------------------------------------------------


def _ginibre(rng: np.random.Generator, shape) -> np.ndarray:
    # interleaved (re, im) pairs so a prefix of a batch is a shorter batch
    z = rng.standard_normal((*shape, 2))
    return z[..., 0] + 1j * z[..., 1]


def random_density(d: int, rank: int | None = None, seed: int = 0) -> np.ndarray:
    """Random state ``G G^dag / tr(G G^dag)`` with ``G`` a ``d x rank`` Ginibre matrix.

    The same ``(d, rank, seed)`` always gives bit-identical output.
    """
    rank = d if rank is None else rank
    if d < 1 or not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = _ginibre(rng, (d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def round_robin_ranks(d: int, n: int) -> np.ndarray:
    """Ranks ``1, 2, ..., d, 1, 2, ...`` for ``n`` samples."""
    return 1 + np.arange(n) % d


def random_densities(d: int, n: int, seed: int = 0, ranks=None) -> np.ndarray:
    """Stack of ``n`` random states of dimension ``d``.

    Sample ``i`` comes from the stream keyed by ``(seed, i // STREAM_BLOCK)``,
    so any block can be regenerated on its own and the result does not depend
    on how the work is split. ``ranks`` is an int or a length-``n`` sequence;
    the default cycles through all ranks.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if ranks is None:
        ranks = round_robin_ranks(d, n)
    ranks = np.broadcast_to(np.asarray(ranks, dtype=np.int64), (n,))
    if n and (ranks.min() < 1 or ranks.max() > d):
        raise ValueError(f"ranks must lie in [1, {d}]")
    out = np.empty((n, d, d), dtype=np.complex128)
    cols = np.arange(d)
    for block, start in enumerate(range(0, n, STREAM_BLOCK)):
        stop = min(start + STREAM_BLOCK, n)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
        g = _ginibre(rng, (stop - start, d, d))
        g = g * (cols[None, None, :] < ranks[start:stop, None, None])
        rho = g @ np.swapaxes(g, -1, -2).conj()
        tr = np.trace(rho, axis1=-2, axis2=-1).real
        out[start:stop] = rho / tr[:, None, None]
    return out


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fix."""
    q, r = np.linalg.qr(_ginibre(rng, (d, d)))
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


# -- su(d) basis -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Hermitian generators of su(d) with ``tr(l_i l_j) = 2 delta_ij``.

    ``f_tensor`` and ``d_tensor`` are the structure constants in
    ``l_i l_j = (2/d) delta_ij I + (d_ijk + i f_ijk) l_k``.
    """

    dim: int
    generators: np.ndarray
    f_tensor: np.ndarray
    d_tensor: np.ndarray

    @property
    def size(self) -> int:
        return self.dim * self.dim - 1

    def sparse_d(self, tol: float = 1e-14):
        """Nonzero entries of the d-tensor as ``(ijk, values)``."""
        idx = np.argwhere(np.abs(self.d_tensor) > tol)
        return idx, self.d_tensor[tuple(idx.T)]


def gell_mann(d: int) -> np.ndarray:
    """Generalized Gell-Mann matrices, shape ``(d*d - 1, d, d)``.

    For each column ``j = 1..d-1`` the symmetric/antisymmetric pair for every
    row ``i < j`` is emitted, followed by the diagonal generator acting on the
    first ``j+1`` levels. For ``d = 3`` this is the usual lambda_1..lambda_8,
    and the first ``(d-1)**2 - 1`` generators of su(d) span the embedded
    su(d-1).
    """
    if d < 2:
        raise DimensionError("su(d) needs d >= 2")
    gens = []
    for j in range(1, d):
        for i in range(j):
            sym = np.zeros((d, d), dtype=np.complex128)
            sym[i, j] = sym[j, i] = 1.0
            anti = np.zeros((d, d), dtype=np.complex128)
            anti[i, j] = -1j
            anti[j, i] = 1j
            gens.extend((sym, anti))
        diag = np.zeros(d)
        diag[:j] = 1.0
        diag[j] = -j
        gens.append(np.diag(diag / np.sqrt(j * (j + 1) / 2.0)).astype(np.complex128))
    return np.array(gens)


@lru_cache(maxsize=None)
def su_basis(d: int) -> LieBasis:
    """Gell-Mann basis of su(d) and its structure tensors."""
    lam = gell_mann(d)
    # traces[i, j, k] = tr(l_i l_j l_k)
    traces = np.einsum("iab,jbc,kca->ijk", lam, lam, lam)
    f = ((traces - traces.transpose(1, 0, 2)) / 4j).real
    dt = ((traces + traces.transpose(1, 0, 2)) / 4.0).real
    for arr in (lam, f, dt):
        arr.setflags(write=False)
    return LieBasis(d, lam, f, dt)


# -- Bloch coordinates -------------------------------------------------------


def bloch_factor(d: int) -> float:
    """Coefficient ``k`` in ``rho = (I + k xi.lambda) / d``.

    ``sqrt(d(d-1)/2)`` puts pure states on the unit sphere: 1 for qubits,
    sqrt(3) for qutrits, sqrt(6) for d = 4.
    """
    return float(np.sqrt(d * (d - 1) / 2.0))


def bloch_decode(d: int, xi) -> np.ndarray:
    """Hermitian unit-trace matrix from a Bloch vector (positivity not implied)."""
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape[-1] != d * d - 1:
        raise DimensionError(f"Bloch vector for d={d} needs {d * d - 1} entries, got {xi.shape[-1]}")
    lam = su_basis(d).generators
    traceless = np.tensordot(xi, lam, axes=([-1], [0]))
    return (np.eye(d) + bloch_factor(d) * traceless) / d


def bloch_encode(m) -> np.ndarray:
    """Bloch vector of a Hermitian matrix (or stack); the trace is not stored."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"expected square matrices, got shape {m.shape}")
    d = m.shape[-1]
    lam = su_basis(d).generators
    # tr(m l_i) = sum_ab m_ab (l_i)_ba
    proj = np.einsum("...ab,iba->...i", m, lam).real
    return proj * d / (2.0 * bloch_factor(d))


# -- matrix file format ------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps_matrix(m) -> str:
    """Serialize to ``{"dim": d, "entries": [[[re, im], ...], ...]}``, 17 digits."""
    m = _square(m)
    rows = []
    for row in m:
        cells = ", ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in row)
        rows.append(f"    [{cells}]")
    return '{\n  "dim": %d,\n  "entries": [\n%s\n  ]\n}\n' % (m.shape[0], ",\n".join(rows))


def write_matrix(path, m) -> None:
    Path(path).write_text(dumps_matrix(m), encoding="utf-8")


def loads_matrix(text: str) -> np.ndarray:
    """Parse the matrix document; raises :class:`MatrixFormatError` on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise MatrixFormatError('document must be an object with "dim" and "entries"')
    d = doc["dim"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise MatrixFormatError(f'"dim" must be a positive integer, got {d!r}')
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != d:
        raise MatrixFormatError(f'"entries" must be a list of {d} rows')
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != d:
            raise MatrixFormatError(f"row {i} must have {d} entries")
        for j, cell in enumerate(row):
            ok = (
                isinstance(cell, list)
                and len(cell) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in cell)
            )
            if not ok:
                raise MatrixFormatError(f"entry [{i}][{j}] must be [re, im], got {cell!r}")
            out[i, j] = complex(cell[0], cell[1])
    return out


def read_matrix(path) -> np.ndarray:
    return loads_matrix(Path(path).read_text(encoding="utf-8"))
