"""Integer enumeration kernels.

Two hot loops live here: enumerating a finite abelian group of residues
and mapping it into a fundamental parallelepiped, and scanning an integer
box against a system of linear inequalities. Each has a numba version and
a pure numpy version; ``TORIC_TODD_NUMBA=0`` forces numpy. Both work in
int64, so callers must check :func:`fits_int64` first and fall back to
Python ints otherwise.
"""

from __future__ import annotations

import os

import numpy as np

_INT64_SAFE = 2**62

_flag = os.environ.get("TORIC_TODD_NUMBA", "1").strip().lower()
USE_NUMBA = _flag not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"


def fits_int64(*bounds: int) -> bool:
    return all(abs(int(b)) < _INT64_SAFE for b in bounds)


def _parallelepiped_numpy(diag, wmat, rays, det, open_mask):
    n = int(np.prod(diag)) if len(diag) else 1
    q = np.stack(np.unravel_index(np.arange(n, dtype=np.int64), tuple(int(x) for x in diag)), axis=1)
    a = (q @ wmat) % det
    a = np.where((a == 0) & open_mask[None, :], det, a)
    scaled = a @ rays
    return scaled // det


def _box_numpy(lo, hi, ineq, rhs, chunk=1 << 18):
    shape = tuple(int(h - l + 1) for l, h in zip(lo, hi))
    total = int(np.prod(shape)) if shape else 1
    out = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        pts = np.stack(np.unravel_index(idx, shape), axis=1) + lo[None, :]
        ok = np.all(pts @ ineq.T + rhs[None, :] >= 0, axis=1)
        out.append(pts[ok])
    if not out:
        return np.zeros((0, len(lo)), dtype=np.int64)
    return np.concatenate(out, axis=0)


if USE_NUMBA:

    @njit(cache=True)
    def _parallelepiped_numba(diag, wmat, rays, det, open_mask):
        k = diag.shape[0]
        d = rays.shape[1]
        n = 1
        for i in range(k):
            n *= diag[i]
        out = np.empty((n, d), dtype=np.int64)
        q = np.zeros(k, dtype=np.int64)
        a = np.empty(k, dtype=np.int64)
        for idx in range(n):
            for j in range(k):
                s = 0
                for i in range(k):
                    s += q[i] * wmat[i, j]
                s %= det
                if s == 0 and open_mask[j]:
                    s = det
                a[j] = s
            for c in range(d):
                s = 0
                for j in range(k):
                    s += a[j] * rays[j, c]
                out[idx, c] = s // det
            # mixed-radix increment, last digit fastest (matches numpy order)
            i = k - 1
            while i >= 0:
                q[i] += 1
                if q[i] < diag[i]:
                    break
                q[i] = 0
                i -= 1
        return out

    @njit(cache=True)
    def _box_numba(lo, hi, ineq, rhs):
        d = lo.shape[0]
        m = ineq.shape[0]
        total = 1
        for i in range(d):
            total *= hi[i] - lo[i] + 1
        buf = np.empty((total, d), dtype=np.int64)
        x = lo.copy()
        count = 0
        for _ in range(total):
            ok = True
            for r in range(m):
                s = rhs[r]
                for c in range(d):
                    s += ineq[r, c] * x[c]
                if s < 0:
                    ok = False
                    break
            if ok:
                for c in range(d):
                    buf[count, c] = x[c]
                count += 1
            i = d - 1
            while i >= 0:
                x[i] += 1
                if x[i] <= hi[i]:
                    break
                x[i] = lo[i]
                i -= 1
        return buf[:count].copy()


def parallelepiped_residues(diag, wmat, rays, det, open_mask, backend: str | None = None):
    """Points ``(a @ rays) / det`` for every residue vector of ``Z^k / diag``.

    ``a = q @ wmat mod det`` with zero entries lifted to ``det`` where
    ``open_mask`` is set. Rows come out in mixed-radix order of ``q``.
    """
    diag = np.asarray(diag, dtype=np.int64)
    wmat = np.asarray(wmat, dtype=np.int64).reshape(len(diag), len(diag))
    rays = np.asarray(rays, dtype=np.int64)
    open_mask = np.asarray(open_mask, dtype=np.bool_)
    backend = backend or BACKEND
    if backend == "numba" and USE_NUMBA:
        return _parallelepiped_numba(diag, wmat, rays, np.int64(det), open_mask)
    return _parallelepiped_numpy(diag, wmat, rays, np.int64(det), open_mask)


def box_points(lo, hi, ineq, rhs, backend: str | None = None):
    """Integer points ``x`` with ``lo <= x <= hi`` and ``ineq @ x + rhs >= 0``."""
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    ineq = np.asarray(ineq, dtype=np.int64).reshape(-1, len(lo))
    rhs = np.asarray(rhs, dtype=np.int64)
    if np.any(hi < lo):
        return np.zeros((0, len(lo)), dtype=np.int64)
    backend = backend or BACKEND
    if backend == "numba" and USE_NUMBA:
        return _box_numba(lo, hi, ineq, rhs)
    return _box_numpy(lo, hi, ineq, rhs)
