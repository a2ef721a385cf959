"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--n 100000] [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qorbit import kernels
from qorbit.state import su_basis


def workloads(n: int, rng: np.random.Generator) -> dict:
    x = rng.dirichlet(np.ones(4), size=n)
    t = kernels.load_backend("python").power_sums(x, 4)
    mats3 = rng.normal(size=(n, 3, 3))
    mats3 = mats3 + np.swapaxes(mats3, 1, 2)
    mats4 = rng.normal(size=(n, 4, 4))
    mats4 = mats4 + np.swapaxes(mats4, 1, 2)
    mats6 = rng.normal(size=(n, 6, 6))
    mats6 = mats6 + np.swapaxes(mats6, 1, 2)
    xi = rng.normal(size=(n, 15))
    ijk, vals = su_basis(4).sparse_d()
    ijk = np.ascontiguousarray(ijk, dtype=np.int64)
    return {
        "power_sums d=4 k<=8": lambda k: k.power_sums(x, 8),
        "elementary_from_power_sums d=4": lambda k: k.elementary_from_power_sums(t),
        "extend_power_sums d=4 k<=10": lambda k: k.extend_power_sums(t, k.elementary_from_power_sums(t), 10),
        "min_eigvalsh 3x3": lambda k: k.min_eigvalsh(mats3),
        "min_eigvalsh 4x4": lambda k: k.min_eigvalsh(mats4),
        "min_eigvalsh 6x6": lambda k: k.min_eigvalsh(mats6),
        "casimir_contract su(4)": lambda k: k.casimir_contract(xi, ijk, vals),
    }


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=100_000, help="batch size")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    names = kernels.available_backends()
    backends = {name: kernels.load_backend(name) for name in names}
    jobs = workloads(args.n, np.random.default_rng(0))
    print(f"batch size {args.n}, best of {args.repeat}")
    print(f"(the dispatcher sends matrices larger than {kernels.JACOBI_MAX}x{kernels.JACOBI_MAX} to LAPACK)")
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name in names) + ("    speedup" if len(names) > 1 else ""))
    for label, job in jobs.items():
        times = []
        for name in names:
            mod = backends[name]
            job(mod)  # warm-up
            times.append(min(timeit.repeat(lambda: job(mod), number=1, repeat=args.repeat)))
        row = f"{label:34s}" + "".join(f"{1e3 * s:10.2f}ms" for s in times)
        if len(times) > 1:
            row += f"{times[names.index('python')] / times[0]:10.1f}x"
        print(row)


if __name__ == "__main__":
    main()
