"""Hot loops over exponent arrays in Z/M, M = q^m - 1.

Every kernel multiplies by q = p^fq one factor p at a time so that
intermediate products stay far below 2^63 for every modulus used here.

Numba-compiled versions are used when numba imports cleanly; setting
INNERDIST_NO_JIT=1 selects the pure numpy versions. Both paths return
identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "INNERDIST_NO_JIT"

__all__ = [
    "backend",
    "orbit_profile",
    "stabilizer_sizes",
    "twisted_dual_hits",
    "orbit_profile_numpy",
    "stabilizer_sizes_numpy",
    "twisted_dual_hits_numpy",
]


def _mul_pow_np(x: np.ndarray, p: int, times: int, modulus: int) -> np.ndarray:
    for _ in range(times):
        x = (x * p) % modulus
    return x


def orbit_profile_numpy(ks: np.ndarray, modulus: int, p: int, fq: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Orbit size and orbit minimum of each k under k -> k*q."""
    ks = np.asarray(ks, dtype=np.int64)
    x = ks.copy()
    low = ks.copy()
    size = np.zeros(ks.shape[0], dtype=np.int64)
    for i in range(1, m + 1):
        x = _mul_pow_np(x, p, fq, modulus)
        np.minimum(low, x, out=low)
        size[(size == 0) & (x == ks)] = i
    return size, low


def stabilizer_sizes_numpy(
    ks: np.ndarray, modulus: int, p: int, fq: int, fe: int, c: int, m: int
) -> np.ndarray:
    """Number of j in [0, c) with k*qE^j in the q-orbit of k, qE = p^fe."""
    ks = np.asarray(ks, dtype=np.int64)
    orbit = np.empty((ks.shape[0], m), dtype=np.int64)
    x = ks.copy()
    for i in range(m):
        orbit[:, i] = x
        x = _mul_pow_np(x, p, fq, modulus)
    y = ks.copy()
    count = np.zeros(ks.shape[0], dtype=np.int64)
    for _ in range(c):
        count += (orbit == y[:, None]).any(axis=1)
        y = _mul_pow_np(y, p, fe, modulus)
    return count


def twisted_dual_hits_numpy(
    ks: np.ndarray, modulus: int, p: int, fq: int, ft: int, m: int
) -> np.ndarray:
    """Whether -k lies in the q-orbit of k*p^ft."""
    ks = np.asarray(ks, dtype=np.int64)
    target = (-ks) % modulus
    y = _mul_pow_np(ks.copy(), p, ft, modulus)
    hit = np.zeros(ks.shape[0], dtype=np.bool_)
    for _ in range(m):
        hit |= y == target
        y = _mul_pow_np(y, p, fq, modulus)
    return hit


def _loop_mul_pow(x, p, times, modulus):
    for _ in range(times):
        x = (x * p) % modulus
    return x


def _loop_orbit_profile(ks, modulus, p, fq, m):
    n = ks.shape[0]
    size = np.zeros(n, dtype=np.int64)
    low = np.empty(n, dtype=np.int64)
    for t in range(n):
        k = ks[t]
        x = k
        lo = k
        s = 0
        for i in range(1, m + 1):
            x = _mul_pow(x, p, fq, modulus)
            if x < lo:
                lo = x
            if s == 0 and x == k:
                s = i
        size[t] = s
        low[t] = lo
    return size, low


def _loop_stabilizer_sizes(ks, modulus, p, fq, fe, c, m):
    n = ks.shape[0]
    count = np.zeros(n, dtype=np.int64)
    orbit = np.empty(m, dtype=np.int64)
    for t in range(n):
        x = ks[t]
        for i in range(m):
            orbit[i] = x
            x = _mul_pow(x, p, fq, modulus)
        y = ks[t]
        for _ in range(c):
            for i in range(m):
                if orbit[i] == y:
                    count[t] += 1
                    break
            y = _mul_pow(y, p, fe, modulus)
    return count


def _loop_twisted_dual_hits(ks, modulus, p, fq, ft, m):
    n = ks.shape[0]
    hit = np.zeros(n, dtype=np.bool_)
    for t in range(n):
        k = ks[t]
        target = (modulus - k) % modulus
        y = _mul_pow(k, p, ft, modulus)
        for _ in range(m):
            if y == target:
                hit[t] = True
                break
            y = _mul_pow(y, p, fq, modulus)
    return hit


_mul_pow = _loop_mul_pow
_JIT = None
if os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes"):
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = None
    if njit is not None:
        _mul_pow = njit(cache=True, nogil=True)(_loop_mul_pow)
        _JIT = tuple(
            njit(cache=True, nogil=True)(fn)
            for fn in (_loop_orbit_profile, _loop_stabilizer_sizes, _loop_twisted_dual_hits)
        )


def backend() -> str:
    return "numba" if _JIT is not None else "numpy"


def orbit_profile(ks, modulus: int, p: int, fq: int, m: int):
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _JIT is None:
        return orbit_profile_numpy(ks, modulus, p, fq, m)
    return _JIT[0](ks, np.int64(modulus), np.int64(p), fq, m)


def stabilizer_sizes(ks, modulus: int, p: int, fq: int, fe: int, c: int, m: int):
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _JIT is None:
        return stabilizer_sizes_numpy(ks, modulus, p, fq, fe, c, m)
    return _JIT[1](ks, np.int64(modulus), np.int64(p), fq, fe, c, m)


def twisted_dual_hits(ks, modulus: int, p: int, fq: int, ft: int, m: int):
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if _JIT is None:
        return twisted_dual_hits_numpy(ks, modulus, p, fq, ft, m)
    return _JIT[2](ks, np.int64(modulus), np.int64(p), fq, ft, m)
