"""Compare the numba and numpy kernel backends.

Times the triple-trace sweep used by the trace method, one evaluation of the
two-qudit right-hand side, and a short RK4 trajectory. Each case is warmed up
once so numba compilation is excluded.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from spinalg import _kernels, build_tables, hermitian_basis
from spinalg.dynamics import deriv_two_qudit, integrate


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    for spin in ("3/2", "5/2", "7/2"):
        mats = hermitian_basis(spin).matrices[1:]
        yield f"triple traces S={spin}", lambda be, m=mats: be.triple_traces(m)

    for s1, s2 in (("1", "1/2"), ("2", "3/2")):
        t1, t2 = build_tables(s1), build_tables(s2)
        p1, p2 = t1.packed(), t2.packed()
        shape = (t1.n + 1, t2.n + 1)
        h, R = rng.normal(size=shape), rng.normal(size=shape)
        yield (f"two-qudit rhs ({s1}, {s2})",
               lambda be, p1=p1, p2=p2, h=h, R=R: be.two_qudit_rhs(p1, p2, h, R, 0.8, 0.5))

    t1, t2 = build_tables(1), build_tables("1/2")
    h = rng.normal(size=(9, 4))
    R0 = rng.normal(size=(9, 4))

    def run(be):
        _kernels.backend = lambda: be
        try:
            integrate(lambda R: deriv_two_qudit(R, h, t1, t2), R0, 1e-3, 2000)
        finally:
            _kernels.backend = original

    original = _kernels.backend
    yield "RK4 2000 steps (1, 1/2)", run


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels.numba_backend is None:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'case':32s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases():
        t_np = best_of(lambda: fn(_kernels.numpy_backend), args.repeat)
        t_nb = best_of(lambda: fn(_kernels.numba_backend), args.repeat)
        print(f"{name:32s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}x")


if __name__ == "__main__":
    main()
