"""Pure numpy fallback for the batch kernels in ``_kernels.pyx``.

Every function takes and returns C-contiguous float64 arrays with the same
shapes as its compiled twin.
"""

import numpy as np

BACKEND = "python"


def power_sums(x, kmax):
    x = np.asarray(x, dtype=np.float64)
    powers = x[:, :, None] ** np.arange(1, kmax + 1)
    return np.ascontiguousarray(powers.sum(axis=1))


def elementary_from_power_sums(t):
    t = np.asarray(t, dtype=np.float64)
    n, m = t.shape
    e = np.empty((n, m))
    for k in range(1, m + 1):
        acc = (-1.0) ** (k - 1) * t[:, k - 1]
        for i in range(1, k):
            acc = acc + (-1.0) ** (i - 1) * e[:, k - i - 1] * t[:, i - 1]
        e[:, k - 1] = acc / k
    return e


def extend_power_sums(t, e, kmax):
    t = np.asarray(t, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    n, d = t.shape
    out = np.empty((n, kmax))
    out[:, : min(d, kmax)] = t[:, :kmax]
    for k in range(d + 1, kmax + 1):
        acc = np.zeros(n)
        for i in range(1, d + 1):
            j = k - i
            tj = float(d) if j == 0 else out[:, j - 1]
            acc = acc + (-1.0) ** (i - 1) * e[:, i - 1] * tj
        out[:, k - 1] = acc
    return out


def min_eigvalsh(mats):
    mats = np.asarray(mats, dtype=np.float64)
    sym = 0.5 * (mats + np.swapaxes(mats, -1, -2))
    return np.linalg.eigvalsh(sym)[:, 0].copy()


def casimir_contract(xi, ijk, vals):
    xi = np.asarray(xi, dtype=np.float64)
    n, dim = xi.shape
    v = np.zeros((n, dim))
    np.add.at(v.T, ijk[:, 2], (vals * xi[:, ijk[:, 0]] * xi[:, ijk[:, 1]]).T)
    out = np.empty((n, 3))
    out[:, 0] = np.einsum("si,si->s", xi, xi)
    out[:, 1] = np.sqrt(1.5) * np.einsum("si,si->s", v, xi)
    out[:, 2] = 1.5 * np.einsum("si,si->s", v, v)
    return out
