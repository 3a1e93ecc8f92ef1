"""Compare the numba kernels with their numpy fallbacks on census-sized inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

Both paths run in one process: the numpy versions are called directly,
the compiled versions through the public dispatchers. A warm-up call
keeps JIT compilation out of the timings. Outputs are compared exactly.
"""

from __future__ import annotations

import argparse
import time
from math import gcd

import numpy as np

from innerdist import _kernels
from innerdist.ff_cuspidal import prime_power

# (q0, m, c): sizes taken from the stabilizer census
CASES = [(3, 1, 9), (3, 3, 3), (5, 1, 7), (5, 3, 3), (5, 9, 1)]


def _inputs(q0: int, m: int, c: int) -> tuple[np.ndarray, tuple[int, ...]]:
    p, a = prime_power(q0)
    M = (q0 ** (2 * c)) ** m - 1
    parts = [np.arange(0, M, M // gcd(M, q0 ** (c * (2 * i + 1)) + 1), dtype=np.int64) for i in range(m)]
    return np.unique(np.concatenate(parts)), (M, p, 2 * a * c, a * c, 2 * a, c, m)


def _run(ks, params, numpy_path: bool):
    M, p, fq, ft, fe, c, m = params
    if numpy_path:
        return (
            _kernels.orbit_profile_numpy(ks, M, p, fq, m),
            _kernels.twisted_dual_hits_numpy(ks, M, p, fq, ft, m),
            _kernels.stabilizer_sizes_numpy(ks, M, p, fq, fe, c, m),
        )
    return (
        _kernels.orbit_profile(ks, M, p, fq, m),
        _kernels.twisted_dual_hits(ks, M, p, fq, ft, m),
        _kernels.stabilizer_sizes(ks, M, p, fq, fe, c, m),
    )


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _same(a, b) -> bool:
    (s1, l1), h1, t1 = a
    (s2, l2), h2, t2 = b
    return all(np.array_equal(x, y) for x, y in ((s1, s2), (l1, l2), (h1, h2), (t1, t2)))


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"backend: {_kernels.backend()}")
    print(f"{'q0':>3} {'m':>2} {'c':>2} {'inputs':>9} {'numpy s':>9} {'numba s':>9} {'speedup':>8}  equal")
    for q0, m, c in CASES:
        ks, params = _inputs(q0, m, c)
        ref = _run(ks, params, numpy_path=True)
        got = _run(ks, params, numpy_path=False)  # warm-up
        t_np = _best(lambda: _run(ks, params, True), args.repeat)
        t_jit = _best(lambda: _run(ks, params, False), args.repeat)
        print(f"{q0:>3} {m:>2} {c:>2} {len(ks):>9} {t_np:>9.4f} {t_jit:>9.4f} {t_np / t_jit:>7.1f}x  {_same(ref, got)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
