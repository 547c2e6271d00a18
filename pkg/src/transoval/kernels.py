"""Hot loops, dispatched to the compiled extension when it is importable.

Set ``TRANSOVAL_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from math import comb

import numpy as np

from . import _fallback

try:
    if os.environ.get("TRANSOVAL_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _kernels
except ImportError:
    _kernels = None

BACKEND = "cython" if _kernels is not None else "python"


def available_backends():
    return ("cython", "python") if _kernels is not None else ("python",)


def _tables(F):
    mul = np.asarray(F.mul_table, dtype=np.uint8).reshape(F.q, F.q)
    inv = np.asarray(F.inv_table, dtype=np.uint8)
    return np.ascontiguousarray(mul), inv


def _chunks(n, threads):
    """Split first indices so each chunk carries a similar number of triples."""
    total = comb(n, 3)
    bounds = [0]
    acc = 0
    target = total / max(threads, 1)
    for i in range(n):
        acc += comb(n - 1 - i, 2)
        if acc >= target * len(bounds) and len(bounds) < threads:
            bounds.append(i + 1)
    if bounds[-1] != n:
        bounds.append(n)
    return list(zip(bounds[:-1], bounds[1:]))


def triple_plane_keys(F, pts, threads=1, backend=None):
    """Packed plane keys for every triple i < j < k of ``pts`` (int64 array).

    Keys follow lexicographic triple order; collinear triples give -1.
    """
    backend = backend or BACKEND
    pts = [tuple(p) for p in pts]
    n = len(pts)
    if n < 3:
        return np.zeros(0, dtype=np.int64)
    ncols = len(pts[0])
    use_c = backend == "cython" and 3 * ncols * F.h <= 63 and ncols <= 8
    if backend == "cython" and _kernels is None:
        raise RuntimeError("compiled kernels are not available")
    if not use_c:
        return np.asarray(_fallback.triple_plane_keys(pts, F, 0, n), dtype=np.int64)
    arr = np.ascontiguousarray(np.asarray(pts, dtype=np.uint8))
    mul, inv = _tables(F)
    out = np.empty(comb(n, 3), dtype=np.int64)
    jobs = []
    for i0, i1 in _chunks(n, threads):
        offset = comb(n, 3) - comb(n - i0, 3)
        jobs.append((i0, i1, offset))
    if threads <= 1 or len(jobs) == 1:
        for i0, i1, off in jobs:
            _kernels.triple_plane_keys(arr, mul, inv, F.h, i0, i1, out, off)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futs = [pool.submit(_kernels.triple_plane_keys, arr, mul, inv, F.h, i0, i1, out, off)
                    for i0, i1, off in jobs]
            for f in futs:
                f.result()
    return out


def plane_point_counts(F, pts, threads=1, backend=None):
    """Planes spanned by triples of ``pts`` and how many of ``pts`` each holds.

    Returns two aligned int64 arrays ``(keys, npoints)`` sorted by key.
    Without collinear triples a plane with k points is hit by C(k,3)
    triples; otherwise the members of its spanning triples are counted.
    """
    keys = triple_plane_keys(F, pts, threads=threads, backend=backend)
    good = keys >= 0
    if good.all():
        uniq, triples = np.unique(keys, return_counts=True)
        npoints = np.empty_like(triples)
        for t in np.unique(triples).tolist():
            npoints[triples == t] = _points_from_triples(t)
        return uniq, npoints
    n = len(pts)
    idx = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)[good]
    keys = keys[good]
    # every point of a plane lies in some non-collinear triple spanning it
    pairs = np.unique(np.stack([np.repeat(keys, 3), idx.ravel()], axis=1), axis=0)
    uniq, npoints = np.unique(pairs[:, 0], return_counts=True)
    return uniq, npoints.astype(np.int64)


def _points_from_triples(t):
    # inverse of k -> C(k, 3)
    k = 3
    while comb(k, 3) < t:
        k += 1
    if comb(k, 3) != t:
        raise AssertionError(f"{t} triples cannot come from a single point set")
    return k
