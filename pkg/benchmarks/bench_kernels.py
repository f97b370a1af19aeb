"""Compare the numba and numpy enumeration kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Checks both backends agree, then reports the best wall time of each.
The first numba call pays JIT compilation and is excluded.
"""

import argparse
import time

import numpy as np

from toric_todd import _kernels
from toric_todd.cones import HalfOpenSimplicialCone, residue_data


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def parallelepiped_case(det):
    # half-open cone over e1, e2 and (1, 2, det): det parallelepiped points
    c = HalfOpenSimplicialCone(((1, 0, 0), (0, 1, 0), (1, 2, det)), (False, True, False))
    diag, wmat, index = residue_data(c, cap=det)
    return diag, wmat, c.rays, index, c.open_flags


def box_case(r):
    # lattice points of the ball-ish polytope |x|+|y|+|z| <= r
    signs = np.array([[a, b, c] for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)], dtype=np.int64)
    return [-r] * 3, [r] * 3, -signs, np.full(len(signs), r, dtype=np.int64)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.USE_NUMBA:
        print("numba disabled (TORIC_TODD_NUMBA=0 or not installed); numpy timings only")
    backends = ["numpy"] + (["numba"] if _kernels.USE_NUMBA else [])

    print(f"{'kernel':<16}{'size':>10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for det in (10**4, 10**5, 10**6):
        case = parallelepiped_case(det)
        outs = {b: _kernels.parallelepiped_residues(*case, backend=b) for b in backends}
        assert all(np.array_equal(outs["numpy"], o) for o in outs.values())
        times = {b: best_of(lambda b=b: _kernels.parallelepiped_residues(*case, backend=b), args.repeat)
                 for b in backends}
        _row("parallelepiped", det, times)
    for r in (20, 40, 60):
        case = box_case(r)
        outs = {b: _kernels.box_points(*case, backend=b) for b in backends}
        assert all(np.array_equal(outs["numpy"], o) for o in outs.values())
        times = {b: best_of(lambda b=b: _kernels.box_points(*case, backend=b), args.repeat) for b in backends}
        _row("box", (2 * r + 1) ** 3, times)


def _row(name, size, times):
    cells = "".join(f"{t * 1e3:>10.2f}ms" for t in times.values())
    speed = f"{times['numpy'] / times['numba']:>9.1f}x" if "numba" in times else ""
    print(f"{name:<16}{size:>10}{cells}{speed}")


if __name__ == "__main__":
    main()
