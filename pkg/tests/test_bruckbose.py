from itertools import combinations

import pytest

from transoval.bruckbose import (
    BBPlane,
    Spread,
    baer_conjugate,
    bb_lines_through,
    bb_point_to_pg4,
    conjugate_derivation_regulus,
    coordinatize_regular_spread,
    is_regular,
    opposite_regulus,
    pg4_to_bb_point,
    reguli_of,
    regulus,
    reverse_regulus,
    solid_at_infinity,
    std_regular_spread,
    std_spread_map,
)
from transoval.errors import DomainError
from transoval.field import standard_config
from transoval.projective import enumerate_points, meet, meets, span, subspace


@pytest.fixture(scope="module")
def std4(cfg4):
    return std_regular_spread(cfg4)


def test_standard_lines(cfg4):
    m = std_spread_map(cfg4)
    assert m[None].rows == ((0, 0, 1, 0, 0), (0, 0, 0, 1, 0))
    assert m[0].rows == ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0))


@pytest.mark.parametrize("h", [1, 2, 3])
def test_standard_spread_valid(h):
    cfg = standard_config(h)
    s = std_regular_spread(cfg)
    q = cfg.q
    assert len(s) == q * q + 1
    assert s.is_valid()
    covered = {p for ln in s for p in ln.points()}
    assert len(covered) == (q ** 4 - 1) // (q - 1)
    assert is_regular(s)


def test_point_map(cfg4):
    E = cfg4.ext
    assert bb_point_to_pg4(cfg4, (0, 0, 1)) == (0, 0, 0, 0, 1)
    assert bb_point_to_pg4(cfg4, (cfg4.tau, 1, 1)) == (0, 1, 1, 0, 1)
    images = set()
    for x in range(E.q):
        for y in range(E.q):
            P = bb_point_to_pg4(cfg4, (x, y, 1))
            images.add(P)
            assert pg4_to_bb_point(cfg4, P) == (x, y, 1)
    assert len(images) == 4 ** 4
    with pytest.raises(DomainError):
        bb_point_to_pg4(cfg4, (1, 0, 0))
    with pytest.raises(DomainError):
        pg4_to_bb_point(cfg4, (1, 0, 0, 0, 0))


def test_lines_of_pg2_are_bb_lines(cfg4, std4):
    """Affine points of each line of PG(2,16) map to the affine part of one BB line."""
    E = cfg4.ext
    F = cfg4.base
    plane = BBPlane(std4)
    for ln in enumerate_points(E, 2):
        if ln[:2] == (0, 0):
            continue  # the line at infinity
        pts = [(x, y, 1) for x in range(E.q) for y in range(E.q)
               if E.mul(ln[0], x) ^ E.mul(ln[1], y) ^ ln[2] == 0]
        img = [bb_point_to_pg4(cfg4, p) for p in pts]
        bb = plane.line_through(img[0], img[1])
        assert all(bb.contains(P) for P in img)
        assert sum(1 for P in plane.affine_points() if bb.contains(P)) == len(pts) == 16
        assert bb.dim == 2
        assert meet(bb, solid_at_infinity(F)) in std4


def test_bb_plane_incidence_q4(std4):
    """Two affine points lie on exactly one line; lines form q^2+1 parallel classes."""
    plane = BBPlane(std4)
    aff = plane.affine_points()
    index = {p: i for i, p in enumerate(aff)}
    n = len(aff)
    cover = {}
    for ln in std4:
        classes = {}
        for P in aff:
            classes.setdefault(plane.line_key(P, ln), []).append(index[P])
        assert len(classes) == 16 and all(len(v) == 16 for v in classes.values())
        for members in classes.values():
            for a, b in combinations(members, 2):
                cover[(a, b)] = cover.get((a, b), 0) + 1
    assert len(cover) == n * (n - 1) // 2
    assert set(cover.values()) == {1}
    # lines through distinct spread lines meet in exactly one affine point
    a = plane.line(aff[0], std4.lines[0])
    b = plane.line(aff[5], std4.lines[1])
    common = [P for P in aff if a.contains(P) and b.contains(P)]
    assert len(common) == 1
    assert meet(a, b).dim == 0
    assert meets(a, b)
    off = next(P for P in aff if not a.contains(P))
    c = plane.line(off, std4.lines[0])
    assert meet(a, c) == std4.lines[0]  # parallel lines share only the spread line


def test_bb_lines_through(std4):
    P = (1, 2, 3, 0, 1)
    out = bb_lines_through(P, std4)
    assert len(out) == 17
    for pl, ln in zip(out, std4):
        assert pl.contains(P) and pl.contains_subspace(ln)
        assert sum(1 for m in std4 if pl.contains_subspace(m)) == 1
    for a, b in combinations(out, 2):
        m = meet(a, b)
        assert m.dim == 0 and m.rows[0] == P
    with pytest.raises(DomainError):
        bb_lines_through((1, 0, 0, 0, 0), std4)


def test_baer_subplane_planes(std4):
    """An affine plane with no spread line has its line at infinity meeting q+1 spread lines."""
    F = std4.F
    pl = span(F, (0, 0, 0, 0, 1), (1, 0, 0, 0, 0), (0, 0, 1, 0, 0))
    assert not any(pl.contains_subspace(ln) for ln in std4)
    l_inf = meet(pl, solid_at_infinity(F))
    assert sum(1 for ln in std4 if meets(ln, l_inf)) == 5


def test_regulus_properties(std4):
    lines = std4.lines
    for trip in [(0, 1, 2), (3, 7, 11), (4, 9, 16)]:
        l1, l2, l3 = (lines[i] for i in trip)
        r = regulus(l1, l2, l3)
        opp = opposite_regulus(l1, l2, l3)
        assert len(r) == len(opp) == 5
        assert {l1, l2, l3} <= set(r)
        assert set(r) <= set(lines)
        for a in r:
            for b in opp:
                assert meet(a, b).dim == 0
        for a, b in combinations(r, 2):
            assert not meets(a, b)
    with pytest.raises(DomainError):
        regulus(lines[0], lines[0], lines[1])


def test_reguli_count(std4, cfg4):
    m = std_spread_map(cfg4)
    t_n, t_inf = m[None], m[0]
    allr = list(reguli_of(std4))
    # Baer sublines of PG(1,16): q(q^2+1) = 68
    assert len(allr) == 68
    # avoiding two points: 68 - 2*20 + 5
    assert len(list(reguli_of(std4, avoid=(t_n, t_inf)))) == 33


def test_reverse_regulus(std4):
    r = next(reguli_of(std4))
    s2 = reverse_regulus(std4, r)
    assert s2.is_valid()
    assert not is_regular(s2)
    opp = opposite_regulus(*r[:3])
    assert reverse_regulus(s2, opp) == std4
    with pytest.raises(DomainError):
        reverse_regulus(s2, r)


def test_q2_spreads_all_regular():
    cfg = standard_config(1)
    s = std_regular_spread(cfg)
    assert is_regular(s)
    r = next(reguli_of(s))
    assert is_regular(reverse_regulus(s, r))


def test_spread_problems(std4):
    F = std4.F
    broken = Spread(std4.lines[:-1])
    assert broken.problems()
    extra = subspace(F, [(1, 0, 0, 0, 0), (0, 0, 1, 0, 0)], 5)
    assert Spread(std4.lines[1:] + (extra,)).problems()


@pytest.mark.parametrize("h", [2, 3])
def test_coordinatization_matches_standard(h):
    cfg = standard_config(h)
    m = std_spread_map(cfg)
    s = std_regular_spread(cfg)
    labels = coordinatize_regular_spread(s, cfg, m[0], m[None], unit=m[1])
    assert labels[m[None]] is None
    finite = [(d, labels[ln]) for d, ln in m.items() if d is not None]
    # the labelling is the standard one or its conjugate, never a mixture
    assert (all(d == x for d, x in finite)
            or all(cfg.conj(d) == x for d, x in finite))


def test_baer_involution(cfg4):
    E = cfg4.ext
    frame = [0, 1, None]  # the subline GF(4) u {inf}
    for x in range(E.q):
        y = baer_conjugate(cfg4, frame, x)
        assert y == cfg4.conj(x)
        assert baer_conjugate(cfg4, frame, y) == x


def test_conjugate_derivation_regulus(std4, cfg4):
    m = std_spread_map(cfg4)
    reg = conjugate_derivation_regulus(std4, cfg4, m[None], m[0])
    assert len(reg) == 5 and set(reg) <= set(std4.lines)
    assert m[None] not in reg and m[0] not in reg
    s8 = std_regular_spread(standard_config(3))
    m8 = std_spread_map(standard_config(3))
    with pytest.raises(DomainError):
        conjugate_derivation_regulus(s8, standard_config(3), m8[None], m8[0])
