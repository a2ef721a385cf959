"""Library side of the CLI: every command is a pure function of its arguments."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import orbitspace as osp
from . import qudit4
from .invariants import casimirs_d4, newton_t_to_S, power_sums, trace_invariants
from .state import bloch_encode, random_densities, round_robin_ranks, validate
from .strata import stratum_classify

QUTRIT_T2_RANGE = (0.3, 1.05)
QUTRIT_T3_RANGE = (0.0, 1.05)
QUTRIT_GRID_POINTS = 500
CURVE_POINTS = 1000


def _floats(a):
    return [float(v) for v in np.asarray(a).ravel()]


def analyze(m, tol: float = osp.DEFAULT_TOL) -> dict:
    """Everything the package computes about one matrix, as a nested dict.

    Sections that do not apply (e.g. the qutrit triangle for d != 3, or any
    invariant of a non-Hermitian input) are omitted.
    """
    m = np.asarray(m, dtype=np.complex128)
    rep = validate(m, tol)
    d = m.shape[0]
    out = {
        "dim": d,
        "validity": {
            "hermitian": rep.hermitian,
            "unit_trace": rep.unit_trace,
            "psd": rep.psd,
            "min_eigenvalue": rep.min_eigenvalue,
            "rank": rep.rank,
        },
    }
    if not rep.hermitian:
        return out
    t = trace_invariants(m, d)
    S = newton_t_to_S(t)
    verdict = osp.psd_classify(osp.grad_matrix(t), tol)
    out["invariants"] = {"t": _floats(t), "S": _floats(S)}
    out["grad"] = {
        "class": verdict.cls,
        "min_eigenvalue": verdict.min_eigenvalue,
        "scale": verdict.scale,
    }
    mem = osp.membership(t, normalized=rep.unit_trace, tol=tol)
    out["membership"] = {"status": mem.status, "active": list(mem.active)}
    if d == 3 and rep.unit_trace:
        region = osp.qutrit_region(t[1], t[2], tol)
        out["region"] = {"location": region.location, "binding": list(region.binding)}
        if rep.physical:
            label = stratum_classify(m, tol=tol)
            out["stratum"] = {
                "orbit_dim": label.orbit_dim,
                "stability_group": label.stability_group,
                "location": label.location,
            }
    if d == 4:
        c = casimirs_d4(bloch_encode(m))
        s, s_ok = qudit4.positivity_d4(c, tol)
        g = osp.psd_classify(qudit4.grad4(c), tol)
        out["casimirs"] = {"c2": c.c2, "c3": c.c3, "c4": c.c4}
        out["qudit4"] = {
            "S": list(s),
            "s_ok": s_ok,
            "grad_min_eigenvalue": g.min_eigenvalue,
            "grad_ok": g.is_psd,
            "ps_values": list(qudit4.ps_inequalities(c)),
        }
    return out


def is_physical(report: dict) -> bool:
    v = report["validity"]
    return v["hermitian"] and v["unit_trace"] and v["psd"]


def verify(d: int, n: int, seed: int, tol: float = 1e-8) -> dict:
    """Sample ``n`` states (ranks round-robin) and count indefinite Grad matrices."""
    if not 2 <= d <= 8:
        raise ValueError("dimension must lie in [2, 8]")
    if n < 1:
        raise ValueError("n must be >= 1")
    ranks = round_robin_ranks(d, n)
    rhos = random_densities(d, n, seed, ranks)
    x = np.linalg.eigvalsh(rhos)
    t = power_sums(x, d)
    codes, lo, _ = osp.psd_batch(osp.grad_matrix(t), tol)
    by_rank = {}
    for r in range(1, d + 1):
        sel = ranks == r
        if not np.any(sel):
            continue
        by_rank[str(r)] = {
            "n": int(np.count_nonzero(sel)),
            "min_grad_eigenvalue": float(lo[sel].min()),
            "boundary": int(np.count_nonzero(codes[sel] == 1)),
            "violations": int(np.count_nonzero(codes[sel] == 2)),
        }
    return {
        "dim": d,
        "n": n,
        "seed": seed,
        "tol": tol,
        "min_grad_eigenvalue_overall": float(lo.min()),
        "violations": int(np.count_nonzero(codes == 2)),
        "by_rank": by_rank,
    }


def _axis(lo, hi, points=None, step=None):
    if step is not None:
        return qudit4.Axis(lo, hi, step).nodes()
    return np.linspace(lo, hi, points)


def qutrit_grid(step: float | None = None, points: int = QUTRIT_GRID_POINTS, tol: float = osp.DEFAULT_TOL):
    """Classified ``(t2, t3)`` grid; returns ``(t2_nodes, t3_nodes, codes)``, codes ``[i2, i3]``."""
    t2 = _axis(*QUTRIT_T2_RANGE, points=points, step=step)
    t3 = _axis(*QUTRIT_T3_RANGE, points=points, step=step)
    T2, T3 = np.meshgrid(t2, t3, indexing="ij")
    codes, _ = osp.qutrit_region_codes(T2, T3, tol)
    return t2, t3, codes


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _open(path: Path):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        return path.open("w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def figure_qutrit_triangle(out_dir, step: float | None = None, tol: float = osp.DEFAULT_TOL) -> dict:
    out_dir = Path(out_dir)
    t2, t3, codes = qutrit_grid(step=step, tol=tol)
    status = osp.location_status(codes)
    grid_path = out_dir / "qutrit_grid.csv"
    with _open(grid_path) as fh:
        fh.write("t2,t3,location,status\n")
        for i, a in enumerate(t2):
            sa = _fmt(a)
            for j, b in enumerate(t3):
                fh.write(f"{sa},{_fmt(b)},{osp.LOCATIONS[codes[i, j]]},{osp.STATUSES[status[i, j]]}\n")
    files = [str(grid_path)]
    for name, (x, y) in osp.boundary_curves(CURVE_POINTS).items():
        path = out_dir / f"curve_{name}.csv"
        with _open(path) as fh:
            fh.write("t2,t3\n")
            for a, b in zip(x, y):
                fh.write(f"{_fmt(a)},{_fmt(b)}\n")
        files.append(str(path))
    counts = {loc: int(np.count_nonzero(codes == k)) for k, loc in enumerate(osp.LOCATIONS)}
    return {
        "figure": "qutrit_triangle",
        "grid_shape": [len(t2), len(t3)],
        "counts": counts,
        "files": files,
    }


def figure_qudit_regions(out_dir, step: float = 0.01, tol: float = osp.DEFAULT_TOL) -> dict:
    out_dir = Path(out_dir)
    grid = qudit4.Grid.default(step)
    header = ",".join(qudit4.CSV_HEADER) + "\n"
    psd_path = out_dir / "qudit_rho_psd.csv"
    both_path = out_dir / "qudit_rho_psd_grad_psd.csv"
    summary = qudit4.ScanSummary()
    with _open(psd_path) as f_psd, _open(both_path) as f_both:
        f_psd.write(header)
        f_both.write(header)
        for cols in qudit4.scan_chunks(grid, tol):
            summary.update(cols, tol)
            for line in qudit4.csv_rows(cols, cols["s_ok"]):
                f_psd.write(line + "\n")
            for line in qudit4.csv_rows(cols, cols["s_ok"] & cols["grad_ok"]):
                f_both.write(line + "\n")
    return {
        "figure": "qudit_regions",
        "grid_shape": list(grid.shape),
        "nodes": summary.nodes,
        "s_ok": summary.s_ok,
        "s_ok_and_grad_ok": summary.both_ok,
        "s_ok_not_grad_ok": summary.trimmed,
        "ps_grad_mismatch": summary.ps_grad_mismatch,
        "ps_grad_mismatch_rate": summary.mismatch_rate,
        "files": [str(psd_path), str(both_path)],
    }


def sample_columns(d: int) -> list:
    cols = ["index", "rank"] + [f"t{k}" for k in range(1, d + 1)] + [f"S{k}" for k in range(1, d + 1)]
    cols.append("status")
    if d == 3:
        cols.append("location")
    if d == 4:
        cols += ["c2", "c3", "c4", "s_ok", "grad_ok"]
    return cols


def sample(d: int, n: int, seed: int, out, rank: int | None = None, tol: float = osp.DEFAULT_TOL) -> dict:
    """Write invariant (and Casimir) coordinates of ``n`` random states to CSV."""
    if d < 2:
        raise ValueError("dimension must be >= 2")
    ranks = round_robin_ranks(d, n) if rank is None else np.full(n, rank)
    rhos = random_densities(d, n, seed, ranks)
    x = np.linalg.eigvalsh(rhos)
    t = power_sums(x, d)
    S = newton_t_to_S(t)
    status = osp.membership_status(t, tol)
    extra = {}
    if d == 3:
        extra["location"], _ = osp.qutrit_region_codes(t[:, 1], t[:, 2], tol)
    if d == 4:
        ev = qudit4.evaluate(qudit4.casimirs_of_states(rhos), tol)
        extra = ev
    path = Path(out)
    with _open(path) as fh:
        fh.write(",".join(sample_columns(d)) + "\n")
        for i in range(n):
            cells = [str(i), str(int(ranks[i]))]
            cells += [_fmt(v) for v in t[i]] + [_fmt(v) for v in S[i]]
            cells.append(osp.STATUSES[status[i]])
            if d == 3:
                cells.append(osp.LOCATIONS[extra["location"][i]])
            if d == 4:
                cells += [_fmt(extra[k][i]) for k in ("c2", "c3", "c4")]
                cells += ["true" if extra[k][i] else "false" for k in ("s_ok", "grad_ok")]
            fh.write(",".join(cells) + "\n")
    return {
        "dim": d,
        "n": n,
        "seed": seed,
        "rank": "round-robin" if rank is None else rank,
        "outside": int(np.count_nonzero(status == 2)),
        "file": str(path),
    }
