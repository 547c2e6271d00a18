from itertools import combinations

import numpy as np
import pytest

from transoval import kernels
from transoval.ovals import planes_with_points, subspace_from_key
from transoval.projective import span

needs_ext = pytest.mark.skipif("cython" not in kernels.available_backends(),
                               reason="compiled extension not built")


def _reference_keys(F, pts):
    out = []
    for t in combinations(pts, 3):
        s = span(F, *t)
        out.append(s.key() if s.dim == 2 else -1)
    return out


def test_python_backend_matches_reference(conf4):
    F = conf4.F
    pts = list(conf4.c_points)
    keys = kernels.triple_plane_keys(F, pts, backend="python")
    assert keys.tolist() == _reference_keys(F, pts)


def test_collinear_triples_flagged(cfg4):
    F = cfg4.base
    pts = [(1, 0, 0, 0, 1), (0, 1, 0, 0, 1), (1, 1, 0, 0, 0), (0, 0, 1, 0, 1)]
    keys = kernels.triple_plane_keys(F, pts).tolist()
    assert keys[0] == -1 and all(k >= 0 for k in keys[1:])


@needs_ext
@pytest.mark.parametrize("fixture", ["conf4", "conf8"])
def test_backends_agree(fixture, request):
    c = request.getfixturevalue(fixture)
    F = c.F
    pts = list(c.c_points)[:40]
    a = kernels.triple_plane_keys(F, pts, backend="cython")
    b = kernels.triple_plane_keys(F, pts, backend="python")
    assert np.array_equal(a, b)


@needs_ext
@pytest.mark.parametrize("threads", [2, 3, 5])
def test_threads_do_not_change_result(conf8, threads):
    F = conf8.F
    pts = list(conf8.c_points)
    one = kernels.triple_plane_keys(F, pts, threads=1)
    many = kernels.triple_plane_keys(F, pts, threads=threads)
    assert np.array_equal(one, many)


def test_plane_point_counts(conf4):
    F = conf4.F
    pts = list(conf4.c_points)
    planes = planes_with_points(F, pts)
    for pl, k in planes.items():
        assert sum(1 for p in pts if pl.contains(p)) == k
    keys, counts = kernels.plane_point_counts(F, pts, backend="python")
    assert sorted(keys.tolist()) == keys.tolist()
    assert {subspace_from_key(F, k, 3, 5) for k in keys.tolist()} == set(planes)


def test_chunks_cover_range():
    for n in (3, 10, 64):
        for t in (1, 2, 4, 7):
            ch = kernels._chunks(n, t)
            assert ch[0][0] == 0 and ch[-1][1] == n
            assert all(a[1] == b[0] for a, b in zip(ch, ch[1:]))


def test_counts_with_collinear_points(cfg4):
    F = cfg4.base
    # points 0, 1, 2 are collinear; 3 and 4 lie off that line
    pts = [(0, 0, 0, 0, 1), (1, 0, 0, 0, 1), (2, 0, 0, 0, 1), (0, 1, 0, 0, 1), (0, 0, 1, 0, 1)]
    assert span(F, pts[0], pts[1]).contains(pts[2])
    for backend in kernels.available_backends():
        keys, counts = kernels.plane_point_counts(F, pts, backend=backend)
        got = {subspace_from_key(F, k, 3, 5): c for k, c in zip(keys.tolist(), counts.tolist())}
        for pl, c in got.items():
            assert sum(1 for p in pts if pl.contains(p)) == c
        assert sorted(got.values()) == [3, 3, 3, 4, 4]
