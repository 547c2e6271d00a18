from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import normalized_points, solve_rank
from transoval.errors import DimensionError, DomainError
from transoval.field import FieldTable
from transoval.projective import (
    Homography,
    apply_homography,
    collinear,
    enumerate_points,
    join,
    klein_form,
    klein_inverse,
    klein_map,
    klein_quadric,
    line_frame,
    mat_inv,
    mat_mul,
    mat_vec,
    identity,
    meet,
    meets,
    normalize,
    nullspace,
    num_points,
    rank,
    rref,
    span,
    subspace,
)

F4 = FieldTable.from_poly(2)
F8 = FieldTable.from_poly(3)


@pytest.mark.parametrize("n,h,count", [(1, 1, 3), (4, 2, 341), (3, 3, 585), (2, 2, 21)])
def test_enumerate_points(n, h, count):
    F = FieldTable.from_poly(h)
    pts = enumerate_points(F, n)
    assert len(pts) == count == num_points(n, F.q)
    assert len(set(pts)) == count
    assert set(pts) == normalized_points(n, F.q, h)
    assert enumerate_points(F, n) == pts


def test_span_examples():
    assert span(F4, (1, 0, 0, 0, 0)).dim == 0
    assert span(F4, (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)).dim == 2
    t_n = span(F4, (0, 0, 1, 0, 0), (0, 0, 0, 1, 0))
    assert t_n.rows == ((0, 0, 1, 0, 0), (0, 0, 0, 1, 0))
    t_inf = span(F4, (1, 0, 0, 0, 0), (0, 1, 0, 0, 0))
    assert meet(t_n, t_inf).dim == -1
    assert not meets(t_n, t_inf)
    m0 = subspace(F4, [(0, 1, 0, 0, 0), (0, 0, 0, 1, 0)], 5)
    assert meet(m0, t_n).rows == ((0, 0, 0, 1, 0),)


def test_generic_planes_meet_in_point():
    a = span(F4, (1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0))
    b = span(F4, (0, 0, 1, 0, 0), (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))
    assert meet(a, b).dim == 0


def _vectors(F, ncols):
    return st.lists(st.integers(0, F.q - 1), min_size=ncols, max_size=ncols).filter(any)


@settings(max_examples=200, deadline=None)
@given(st.lists(_vectors(F4, 5), min_size=1, max_size=4),
       st.lists(_vectors(F4, 5), min_size=1, max_size=4))
def test_modular_dimension_law(ra, rb):
    a = subspace(F4, ra, 5)
    b = subspace(F4, rb, 5)
    assert a.dim + b.dim == meet(a, b).dim + join(a, b).dim
    assert rank(F4, ra) == solve_rank(ra, 2) == len(a.rows)
    m = meet(a, b)
    assert a.contains_subspace(m) and b.contains_subspace(m)
    assert meets(a, b) == bool(m)


@settings(max_examples=100, deadline=None)
@given(st.lists(_vectors(F8, 5), min_size=1, max_size=5))
def test_rref_canonical(rows):
    s = subspace(F8, rows, 5)
    again = subspace(F8, list(s.rows) + [rows[0]], 5)
    assert again == s
    red, piv = rref(F8, s.rows)
    assert tuple(tuple(r) for r in red) == s.rows
    for i, c in enumerate(piv):
        assert s.rows[i][c] == 1
        assert all(s.rows[j][c] == 0 for j in range(len(piv)) if j != i)
    for v in nullspace(F8, s.rows, 5):
        for r in s.rows:
            acc = 0
            for x, y in zip(v, r):
                acc ^= F8.mul(x, y)
            assert acc == 0


@settings(max_examples=100, deadline=None)
@given(st.lists(_vectors(F8, 3), min_size=3, max_size=3))
def test_homography_preserves_collinearity(rows):
    if rank(F8, rows) < 3:
        with pytest.raises(DomainError):
            Homography(rows, F8)
        return
    H = Homography(rows, F8)
    pts = enumerate_points(F8, 2)
    ln = span(F8, pts[0], pts[5])
    on = [p for p in pts if ln.contains(p)]
    img = [apply_homography(H, p) for p in on]
    assert all(collinear(F8, img[0], img[1], p) for p in img[2:])
    assert [H.inverse()(p) for p in img] == on
    assert (H @ H.inverse()).matrix == tuple(tuple(r) for r in identity(3))


def test_identity_homography():
    H = Homography.identity(F4, 4)
    for p in enumerate_points(F4, 4)[:50]:
        assert H(p) == p


def test_line_frame():
    pts = enumerate_points(F8, 1)
    for p0, p1, pinf in combinations(pts, 3):
        A = line_frame(F8, p0, p1, pinf)
        assert normalize(F8, mat_vec(F8, A, (0, 1))) == p0
        assert normalize(F8, mat_vec(F8, A, (1, 1))) == p1
        assert normalize(F8, mat_vec(F8, A, (1, 0))) == pinf
    with pytest.raises(DomainError):
        line_frame(F8, pts[0], pts[0], pts[1])


def test_mat_inv():
    M = [(1, 2, 3), (0, 1, 4), (5, 6, 0)]
    assert mat_mul(F8, M, mat_inv(F8, M)) == [tuple(r) for r in identity(3)]
    with pytest.raises(DomainError):
        mat_inv(F8, [(1, 1), (1, 1)])


# -- Klein correspondence ------------------------------------------------------

def _lines_pg3(F):
    pts = enumerate_points(F, 3)
    out = set()
    for a, b in combinations(pts, 2):
        out.add(span(F, a, b))
    return sorted(out, key=lambda s: s.key())


@pytest.fixture(scope="module")
def lines4():
    return _lines_pg3(F4)


def test_klein_examples():
    assert klein_map(span(F4, (1, 0, 0, 0), (0, 1, 0, 0))) == (1, 0, 0, 0, 0, 0)
    m1 = span(F4, (1, 1, 0, 0), (0, 0, 1, 1))
    assert klein_map(m1) == (0, 1, 1, 1, 1, 0)
    assert klein_inverse(F4, (1, 0, 0, 0, 0, 0)) == span(F4, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(DimensionError):
        klein_map(span(F4, (1, 0, 0, 0)))
    with pytest.raises(DomainError):
        klein_inverse(F4, (1, 0, 0, 0, 0, 1))


@pytest.mark.parametrize("h", [2, 3])
def test_canonical_m_t_images(h):
    F = FieldTable.from_poly(h)
    for n in [k for k in range(1, h) if gcd(k, h) == 1]:
        for t in range(F.q):
            s = F.frob(t, n)
            m_t = span(F, (s, 1, 0, 0), (0, 0, t, 1))
            M_t = normalize(F, (0, F.mul(s, t), s, t, 1, 0))
            assert klein_map(m_t) == M_t
            assert klein_inverse(F, M_t) == m_t


def test_klein_exhaustive_q4(lines4):
    assert len(lines4) == (16 + 1) * (16 + 4 + 1)
    images = [klein_map(ln) for ln in lines4]
    assert len(set(images)) == len(lines4)
    for ln, x in zip(lines4, images):
        assert klein_quadric(F4, x) == 0
        assert klein_inverse(F4, x) == ln
    # the quadric has exactly these points
    on_quadric = {p for p in enumerate_points(F4, 5) if klein_quadric(F4, p) == 0}
    assert on_quadric == set(images)


def test_klein_meeting_criterion_q4(lines4):
    images = [klein_map(ln) for ln in lines4]
    for i, j in combinations(range(len(lines4)), 2):
        assert meets(lines4[i], lines4[j]) == (klein_form(F4, images[i], images[j]) == 0)


def test_klein_on_solid_lines():
    ln = span(F4, (1, 0, 2, 3, 0), (0, 1, 1, 0, 0))
    assert klein_map(ln) == klein_map(span(F4, (1, 0, 2, 3), (0, 1, 1, 0)))
