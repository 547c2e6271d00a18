"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

from .projective import pack_rows, rref


def triple_plane_keys(pts, F, i0, i1):
    """Keys for triples (i, j, k), i0 <= i < i1, i < j < k, in lexicographic order."""
    h = F.h
    n = len(pts)
    out = []
    append = out.append
    for i in range(i0, i1):
        a = pts[i]
        for j in range(i + 1, n):
            b = pts[j]
            for k in range(j + 1, n):
                red, _ = rref(F, (a, b, pts[k]))
                append(pack_rows(red, h) if len(red) == 3 else -1)
    return out
