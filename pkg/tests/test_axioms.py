from dataclasses import replace

import pytest

from transoval.axioms import AXIOMS, check_spread_condition, verify_axioms
from transoval.bruckbose import std_regular_spread, std_spread_map
from transoval.errors import DomainError
from transoval.ovals import Configuration, OvalSpec, forward_construct
from transoval import kernels
from transoval.projective import span


@pytest.mark.parametrize("fixture", ["conf4", "conf8", "conf8n5"])
def test_forward_fixtures_pass(fixture, request):
    c = request.getfixturevalue(fixture)
    rep = verify_axioms(c)
    assert rep.passed, rep.summary()
    q = c.q
    assert rep["A2"].counts["covered_once"] == q * q * (q * q - 1) // 2
    assert rep["A3"].counts["plane_non_c_affine_total"] == q ** 4 - q * q
    assert rep["A3"].counts["non_c_affine_points"] == q ** 4 - q * q
    hist = rep["A4"].counts["points_per_plane"]
    assert set(hist) <= {"4", str(q)}
    assert rep["A4"].counts["note"]


def test_counts_q4(conf4):
    rep = verify_axioms(conf4)
    assert rep["A2"].counts["pairs"] == 120
    assert rep["A3"].counts["plane_non_c_affine_total"] == 240 == 20 * 12
    assert rep["A1"].counts["arc_sizes"] == {"4": 20}


def test_counts_q8(conf8):
    rep = verify_axioms(conf8)
    assert rep["A3"].counts["plane_non_c_affine_total"] == 4032 == 72 * 56
    assert rep["A4"].counts["points_per_plane"]["8"] == 72


def test_subset_and_unknown(conf4):
    rep = verify_axioms(conf4, ["A1", "a2"])
    assert list(rep.fragments) == ["A1", "A2"]
    with pytest.raises(DomainError):
        verify_axioms(conf4, ["A5"])
    assert AXIOMS == ("A1", "A2", "A3", "A4")


def test_python_backend_same_report(conf4):
    a = verify_axioms(conf4, ["A4"], backend="python").to_json()
    b = verify_axioms(conf4, ["A4"]).to_json()
    assert a == b
    assert kernels.BACKEND in kernels.available_backends()


# -- mutations -----------------------------------------------------------------

def test_point_deleted(conf4):
    gone = conf4.c_points[0]
    c = replace(conf4, c_points=conf4.c_points[1:])
    rep = verify_axioms(c)
    assert not rep["A1"].passed
    bad = [w for w in rep["A1"].witnesses if w["reason"] == "size"]
    deficient = [i for i, pl in enumerate(conf4.c_planes) if pl.contains(gone)]
    assert sorted(w["plane"] for w in bad) == deficient
    assert all(w["size"] == 3 for w in bad)


def test_plane_replaced_by_random_plane(conf4):
    F = conf4.F
    other = span(F, (0, 0, 0, 0, 1), (1, 2, 0, 0, 1), (0, 0, 1, 3, 1))
    assert other not in conf4.c_planes
    c = replace(conf4, c_planes=(other,) + conf4.c_planes[1:])
    rep = verify_axioms(c)
    assert not rep.passed
    assert any(w["plane"] == 0 for w in rep["A1"].witnesses)
    assert not rep["A2"].passed


def test_plane_deleted(conf4):
    dropped = conf4.c_planes[0]
    c = replace(conf4, c_planes=conf4.c_planes[1:])
    rep = verify_axioms(c)
    assert rep["A2"].counts["uncovered"] == 6
    assert rep["A2"].counts["multiply_covered"] == 0
    zero = [w for w in rep["A3"].witnesses if w["planes"] == 0]
    assert len(zero) == 12
    assert all(dropped.contains(w["point"]) for w in zero)
    assert rep["A3"].counts["histogram"]["0"] == 12


def test_plane_duplicated(conf4):
    c = replace(conf4, c_planes=conf4.c_planes + conf4.c_planes[:1])
    rep = verify_axioms(c, ["A2"])
    assert rep["A2"].counts["multiply_covered"] == 6
    assert all(w["planes"] == 2 for w in rep["A2"].witnesses)


def test_five_coplanar_points(conf4):
    """An extra point on a 4-point plane makes a plane with 5 C-points."""
    F = conf4.F
    cset = set(conf4.c_points)
    target = None
    for i, a in enumerate(conf4.c_points):
        for b in conf4.c_points[i + 1:]:
            for cpt in conf4.c_points:
                pl = span(F, a, b, cpt)
                if pl.dim == 2 and pl not in conf4.c_planes:
                    target = pl
                    break
            if target:
                break
        if target:
            break
    extra = next(p for p in target.points() if p[4] and p not in cset)
    c = Configuration(conf4.cfg, conf4.c_points + (extra,), conf4.c_planes)
    rep = verify_axioms(c, ["A4"])
    assert not rep.passed
    assert {"basis": target.to_json(), "c_points": 5} in rep["A4"].witnesses


# -- spread condition ----------------------------------------------------------

def test_spread_condition_standard(conf4, rec4):
    s = std_regular_spread(conf4.cfg)
    chk = check_spread_condition(conf4, s, rec4.t_n, rec4.t_inf, rec4.c_lines)
    assert chk.side_a and chk.side_b and chk.consistent
    assert chk.max_points_on_line == 2


def test_spread_condition_requires_special_lines(conf4, rec4):
    m = std_spread_map(conf4.cfg)
    s = std_regular_spread(conf4.cfg)
    other = span(conf4.F, (1, 0, 0, 0, 0), (0, 0, 1, 0, 0))
    with pytest.raises(DomainError):
        check_spread_condition(conf4, s, other, m[0], rec4.c_lines)


def test_scaled_fixture_passes(cfg4):
    c = forward_construct(OvalSpec(cfg4, 1, 5))
    assert verify_axioms(c).passed
