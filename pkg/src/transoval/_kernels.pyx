# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled triple-span plane scan.

For every triple i < j < k of points the reduced echelon basis of the plane
they span is packed into a 64-bit key (row-major, h bits per entry, same
layout as ``projective.pack_rows``).  Collinear triples get key -1.
"""

from libc.stdint cimport int64_t, uint8_t

cdef enum:
    MAXC = 8


cdef int64_t _plane_key(uint8_t[:, ::1] pts, Py_ssize_t a, Py_ssize_t b, Py_ssize_t c,
                        const uint8_t[:, ::1] mul, const uint8_t[::1] inv,
                        int ncols, int h) nogil:
    cdef uint8_t m[3][MAXC]
    cdef uint8_t tmp, f
    cdef int r = 0, col, p, i, cc
    cdef int64_t key = 0
    for cc in range(ncols):
        m[0][cc] = pts[a, cc]
        m[1][cc] = pts[b, cc]
        m[2][cc] = pts[c, cc]
    for col in range(ncols):
        if r == 3:
            break
        p = r
        while p < 3 and m[p][col] == 0:
            p += 1
        if p == 3:
            continue
        if p != r:
            for cc in range(ncols):
                tmp = m[p][cc]
                m[p][cc] = m[r][cc]
                m[r][cc] = tmp
        f = m[r][col]
        if f != 1:
            f = inv[f]
            for cc in range(ncols):
                m[r][cc] = mul[f, m[r][cc]]
        for i in range(3):
            if i != r:
                f = m[i][col]
                if f != 0:
                    for cc in range(ncols):
                        m[i][cc] = m[i][cc] ^ mul[f, m[r][cc]]
        r += 1
    if r < 3:
        return -1
    for i in range(3):
        for cc in range(ncols):
            key = (key << h) | m[i][cc]
    return key


def triple_plane_keys(uint8_t[:, ::1] pts, const uint8_t[:, ::1] mul,
                      const uint8_t[::1] inv, int h, Py_ssize_t i0, Py_ssize_t i1,
                      int64_t[::1] out, Py_ssize_t offset):
    """Fill ``out[offset:]`` with keys of all triples whose first index is in [i0, i1)."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef int ncols = <int>pts.shape[1]
    cdef Py_ssize_t i, j, k, pos = offset
    if ncols > MAXC:
        raise ValueError("too many coordinates for the compiled kernel")
    with nogil:
        for i in range(i0, i1):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    out[pos] = _plane_key(pts, i, j, k, mul, inv, ncols, h)
                    pos += 1
    return pos
