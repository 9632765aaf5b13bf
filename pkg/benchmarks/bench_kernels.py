"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--hall-left 16 18 20] [--sweeps 3x4 3x5]

hall_scan runs once on a random graph of the given left size;
involution_search runs on every member of B(n, k), the exhaustive workload.
"""
import argparse
import random
import timeit

from biregular import _kernels_py
from biregular.matching import _left_adjacency
from biregular.model import WeightMatrix, enumerate_bnk, instance_from_matrix

try:
    from biregular import _ckernels
except ImportError:
    _ckernels = None


def hall_case(n_left: int, seed: int):
    rng = random.Random(seed)
    rows = [[int(rng.random() < 0.3) for _ in range(n_left)] for _ in range(n_left)]
    adj = [sum(1 << j for j in nbrs) for nbrs in _left_adjacency(WeightMatrix.of(rows))]
    return adj, n_left


def sweep_case(n: int, k: int):
    out = []
    for B in enumerate_bnk(n, k):
        g = instance_from_matrix(B)
        out.append((list(g.u), list(g.v), n, k, 0))
    return out


def run_hall(mod, case):
    return mod.hall_scan(*case)


def run_sweep(mod, cases):
    return [mod.involution_search(*c) for c in cases]


def bench(fn, mod, case, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(mod, case), number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--hall-left", type=int, nargs="+", default=[16, 18, 20])
    p.add_argument("--sweeps", nargs="+", default=["3x4", "4x4", "3x5"])
    args = p.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the Python timings are shown")

    print(f"{'kernel':<22}{'size':>8}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    cases = [("hall_scan", f"{n}", run_hall, hall_case(n, n)) for n in args.hall_left]
    for spec in args.sweeps:
        n, k = map(int, spec.lower().split("x"))
        cases.append(("involution_search", f"B({n},{k})", run_sweep, sweep_case(n, k)))
    for name, size, fn, case in cases:
        py = bench(fn, _kernels_py, case, args.repeat)
        if _ckernels is None:
            print(f"{name:<22}{size:>8}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        cy = bench(fn, _ckernels, case, args.repeat)
        # same answers, or the timing means nothing
        assert fn(_ckernels, case) == fn(_kernels_py, case), name
        print(f"{name:<22}{size:>8}{py:>12.4f}{cy:>12.4f}{py / max(cy, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
