"""Recover a regular spread and a translation hyperoval from C-points and C-planes.

Pipeline: parallel classes of C-planes -> C-lines -> plus points and the
two special lines t_N, t_inf -> the permutation of PG(1,q) that the C-lines
induce between t_N and t_inf -> a power-map fit giving the exponent n ->
a homography to canonical coordinates -> the standard regular spread pulled
back, with the C-points checked to satisfy x = c * y^(2^n) in P(S).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import gcd

from .axioms import verify_axioms
from .bruckbose import (
    Spread,
    is_regular,
    normalize_affine,
    pg4_to_bb_point,
    std_regular_spread,
)
from .errors import (
    GeometryError,
    InconsistentClass,
    NotAffinePlane,
    NotTranslationType,
    ReconstructionFailed,
    StructureViolation,
)
from .ovals import NUCLEUS, P_INF, Configuration, find_collinear_triple, hyperoval_completion
from .projective import (
    Homography,
    Subspace,
    enumerate_points,
    klein_form,
    klein_map,
    klein_quadric,
    line_frame,
    mat_inv,
    mat_vec,
    meet,
    meets,
    normalize,
    nullspace,
    rank,
    span,
    subspace,
)


@dataclass(frozen=True)
class ParallelStructure:
    """C-planes grouped into parallel classes, with the C-line of each class."""

    classes: tuple
    c_lines: tuple = ()


@dataclass(frozen=True)
class SpecialLines:
    t_n: Subspace
    t_inf: Subspace
    plus_points: tuple
    sharp_points: tuple
    plus_by_class: tuple = field(default=(), repr=False)


def _union_find(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def build_affine_plane(c: Configuration):
    """Parallel classes: closure of 'no common C-point' on the C-planes."""
    q = c.q
    index = {p: i for i, p in enumerate(c.c_points)}
    members = [frozenset(index[p] for p in c.points_on(pl)) for pl in c.c_planes]
    edges = [(i, j) for i, j in combinations(range(len(members)), 2)
             if not members[i] & members[j]]
    groups = _union_find(len(members), edges)
    sizes = sorted(len(g) for g in groups)
    if len(groups) != q + 1 or sizes != [q] * (q + 1):
        raise NotAffinePlane(f"parallel classes have sizes {sizes}, expected {q + 1} x {q}")
    return ParallelStructure(tuple(tuple(c.c_planes[i] for i in g) for g in groups))


def compute_c_lines(ps: ParallelStructure, c: Configuration):
    """Common line at infinity of each class; classes must give pairwise skew lines."""
    lines = []
    for k, cls in enumerate(ps.classes):
        common = None
        for a, b in combinations(cls, 2):
            m = meet(a, b)
            if m.dim != 1 or not m.at_infinity():
                raise InconsistentClass(f"class {k}: two planes meet in dimension {m.dim}")
            if common is None:
                common = m
            elif m != common:
                raise InconsistentClass(f"class {k}: planes do not share one line")
        lines.append(common)
    for i, j in combinations(range(len(lines)), 2):
        if meets(lines[i], lines[j]):
            raise StructureViolation(f"C-lines {i} and {j} are not skew")
    return ParallelStructure(ps.classes, tuple(lines))


def compute_special_lines(ps: ParallelStructure, c: Configuration):
    """Plus points of every C-plane and the two lines covering them."""
    F = c.F
    q = c.q
    per_class = []
    for k, cls in enumerate(ps.classes):
        comps = {hyperoval_completion(F, pl, c.points_on(pl)) for pl in cls}
        if len(comps) != 1:
            raise StructureViolation(f"class {k}: plus points differ between planes")
        comp = comps.pop()
        if not all(p[-1] == 0 for p in comp):
            raise StructureViolation(f"class {k}: plus points are not at infinity")
        if ps.c_lines and not all(ps.c_lines[k].contains(p) for p in comp):
            raise StructureViolation(f"class {k}: plus points are off the C-line")
        per_class.append(comp)
    plus = sorted({p for comp in per_class for p in comp})
    if len(plus) != 2 * (q + 1):
        raise StructureViolation(f"{len(plus)} plus points, expected {2 * (q + 1)}")
    pset = set(plus)
    full = set()
    for a, b in combinations(plus, 2):
        ln = span(F, a, b)
        if ln not in full and sum(1 for p in ln.points() if p in pset) == q + 1:
            full.add(ln)
    full = sorted(full, key=Subspace.key)
    if len(full) != 2 or meets(full[0], full[1]):
        raise StructureViolation(f"plus points lie on {len(full)} full lines, expected 2 disjoint")
    on_c = {p for ln in ps.c_lines for p in ln.points()}
    sharp = tuple(sorted(on_c - pset))
    return SpecialLines(full[0], full[1], tuple(plus), sharp, tuple(per_class))


@dataclass
class ThreeSecantReport:
    lines_checked: int
    violations: list

    @property
    def passed(self):
        return not self.violations


def verify_three_secant_lemma(sl: SpecialLines, ps: ParallelStructure, c: Configuration):
    """Every line through sharp points of two C-lines meets exactly three C-lines, in sharp points."""
    F = c.F
    owner = {}
    for k, ln in enumerate(ps.c_lines):
        for p in ln.points():
            owner[p] = k
    sharp = set(sl.sharp_points)
    seen = set()
    bad = []
    for X, Y in combinations(sl.sharp_points, 2):
        if owner[X] == owner[Y]:
            continue
        ln = span(F, X, Y)
        if ln in seen:
            continue
        seen.add(ln)
        hits = [p for p in ln.points() if p in owner]
        classes = {owner[p] for p in hits}
        if len(hits) != 3 or len(classes) != 3 or not all(p in sharp for p in hits):
            bad.append({"line": ln.to_json(), "c_lines_met": len(classes),
                        "all_sharp": all(p in sharp for p in hits)})
    return ThreeSecantReport(len(seen), bad)


def _solid(ln):
    return normalize(ln.F, ln.rows[0][:4]), normalize(ln.F, ln.rows[1][:4])


def klein_arc(ps: ParallelStructure, sl: SpecialLines):
    """Klein images of the C-lines; checked to form a (q+1)-arc of the transversal solid."""
    F = ps.c_lines[0].F
    K = [klein_map(ln) for ln in ps.c_lines]
    if any(klein_quadric(F, x) for x in K):
        raise StructureViolation("a C-line image is off the Klein quadric")
    tn, ti = klein_map(sl.t_n), klein_map(sl.t_inf)
    for x in K:
        if klein_form(F, x, tn) or klein_form(F, x, ti):
            raise StructureViolation("a C-line image is outside the transversal solid")
    for quad in combinations(K, 4):
        if rank(F, quad) < 4:
            raise StructureViolation("four C-line images are coplanar")
    return tuple(K)


def transversal_solid(F, sl: SpecialLines):
    """Solid of PG(5,q) holding the Klein images of all transversals of t_N and t_inf."""
    forms = [tuple(reversed(klein_map(sl.t_n))), tuple(reversed(klein_map(sl.t_inf)))]
    return subspace(F, nullspace(F, forms, 6), 6)


def _line_coords(ln, p):
    """Coordinates of point ``p`` of ``ln`` w.r.t. its echelon basis, in PG(1,q)."""
    return normalize(ln.F, [p[c] for c in ln.pivots])


def transversal_permutation(ps: ParallelStructure, t_n, t_inf):
    """PG(1,q) -> PG(1,q): a point of t_n goes to the t_inf-point on the same C-line."""
    sigma = {}
    for ln in ps.c_lines:
        y = meet(ln, t_n)
        x = meet(ln, t_inf)
        if y.dim != 0 or x.dim != 0:
            raise StructureViolation("a C-line misses one of the special lines")
        sigma[_line_coords(t_n, y.rows[0])] = _line_coords(t_inf, x.rows[0])
    F = t_n.F
    if len(sigma) != F.q + 1 or len(set(sigma.values())) != F.q + 1:
        raise StructureViolation("C-lines do not induce a bijection between the special lines")
    return sigma


def frob_point(F, p, n):
    return normalize(F, [F.frob(x, n) for x in p])


@dataclass(frozen=True)
class PowerFit:
    """k . sigma . g^-1 = (x -> x^(2^n)) on PG(1,q)."""

    n: int
    g: tuple
    k: tuple


def exponent_candidates(h):
    return [n for n in range(1, h) if gcd(n, h) == 1]


def fit_power_exponent(F, sigma, candidates=None):
    """Charts on both sides turning ``sigma`` into a Frobenius power map.

    Ordered frames (P0, P1, Pinf) are tried in lexicographic order; the
    first frame and exponent that work are returned.
    """
    cands = exponent_candidates(F.h) if candidates is None else candidates
    pts = enumerate_points(F, 1)
    for p0, p1, pinf in permutations(pts, 3):
        A = line_frame(F, p0, p1, pinf)
        B = line_frame(F, sigma[p0], sigma[p1], pinf=sigma[pinf])
        Binv = mat_inv(F, B)
        for n in cands:
            if all(normalize(F, mat_vec(F, Binv, sigma[normalize(F, mat_vec(F, A, x))]))
                   == frob_point(F, x, n) for x in pts):
                return PowerFit(n, tuple(mat_inv(F, A)), tuple(Binv))
    raise NotTranslationType("no frames turn the permutation into x -> x^(2^n)")


def canonical_c_lines(F, n):
    """m_t = <(t^(2^n), 1, 0, 0, 0), (0, 0, t, 1, 0)> for t in GF(q), plus m_inf."""
    out = [subspace(F, [(F.frob(t, n), 1, 0, 0, 0), (0, 0, t, 1, 0)], 5) for t in range(F.q)]
    out.append(subspace(F, [(1, 0, 0, 0, 0), (0, 0, 1, 0, 0)], 5))
    return out


def canonicalizing_homography(F, t_n, t_inf, fit: PowerFit, origin):
    """Homography of PG(4,q) sending t_N, t_inf and the C-lines to canonical form.

    ``origin`` (an affine point) is sent to (0, 0, 0, 0, 1).
    """
    ginv = mat_inv(F, fit.g)
    kinv = mat_inv(F, fit.k)

    def lift(ln, coeffs):
        v = [0] * 5
        for c, row in zip(coeffs, ln.rows):
            v = [x ^ F.mul(c, y) for x, y in zip(v, row)]
        return v

    cols = [
        lift(t_inf, [kinv[0][0], kinv[1][0]]),
        lift(t_inf, [kinv[0][1], kinv[1][1]]),
        lift(t_n, [ginv[0][0], ginv[1][0]]),
        lift(t_n, [ginv[0][1], ginv[1][1]]),
        list(normalize_affine(F, origin)),
    ]
    Hinv = [tuple(col[i] for col in cols) for i in range(5)]
    return Homography(mat_inv(F, Hinv), F)


def exponent_adjustment(cfg, n_lift):
    """Matrix fixing t_N, t_inf that turns m_t into <(t^(2^n) + a0, a1, 0, 0, 0), (0, 0, t, 1, 0)>."""
    F = cfg.base
    a0, a1 = cfg.decompose(cfg.ext.frob(cfg.tau, n_lift))
    return Homography([
        (1, a0, 0, 0, 0),
        (0, a1, 0, 0, 0),
        (0, 0, 1, 0, 0),
        (0, 0, 0, 1, 0),
        (0, 0, 0, 0, 1),
    ], F)


@dataclass(frozen=True)
class PowerLawFit:
    constant: int | None
    holds: bool
    hyperoval: bool


def fit_power_law(cfg, pts, n_lift):
    """Check x = c * y^(2^n_lift) for affine points (x, y, 1) of PG(2,q^2)."""
    E = cfg.ext
    c = None
    ok = True
    for x, y, _ in pts:
        if y == 0:
            ok = ok and x == 0
            continue
        ratio = E.div(x, E.frob(y, n_lift))
        if c is None:
            c = ratio
        elif ratio != c:
            ok = False
    hyper = find_collinear_triple(E, list(pts) + [P_INF, NUCLEUS]) is None
    return PowerLawFit(c, ok, hyper)


@dataclass
class ReconstructionResult:
    special: SpecialLines
    parallel: ParallelStructure
    n_mod_h: int
    n_lift: int
    homography: Homography
    spread: Spread
    fit_constant: int
    roles: str
    transcript: list = field(default_factory=list)

    @property
    def t_n(self):
        return self.special.t_n

    @property
    def t_inf(self):
        return self.special.t_inf

    @property
    def c_lines(self):
        return self.parallel.c_lines


ROLES = ("first-is-N", "first-is-P_inf")


def reconstruct_spread(c: Configuration, check_axioms=True, check_regular=True, threads=1):
    """Run the full reconstruction and return the recovered spread and exponent."""
    cfg = c.cfg
    F = c.F
    h = cfg.h
    log = []

    def stage(name, fn, *args):
        try:
            out = fn(*args)
        except GeometryError as exc:
            raise ReconstructionFailed(f"{name}: {exc}", stage=name) from exc
        log.append({"stage": name, "ok": True})
        return out

    if check_axioms:
        report = verify_axioms(c, threads=threads)
        if not report.passed:
            raise ReconstructionFailed("axioms fail", stage="axioms", detail=report.to_json())
        log.append({"stage": "axioms", "ok": True})

    ps = stage("affine_plane", build_affine_plane, c)
    ps = stage("c_lines", compute_c_lines, ps, c)
    sl = stage("special_lines", compute_special_lines, ps, c)
    stage("klein_arc", klein_arc, ps, sl)
    origin = c.c_points[0]
    tried = []
    for role in ROLES:
        t_n, t_inf = (sl.t_n, sl.t_inf) if role == ROLES[0] else (sl.t_inf, sl.t_n)
        sigma = stage("transversal_permutation", transversal_permutation, ps, t_n, t_inf)
        try:
            fit = fit_power_exponent(F, sigma)
        except NotTranslationType as exc:
            raise ReconstructionFailed(str(exc), stage="power_fit") from exc
        H = canonicalizing_homography(F, t_n, t_inf, fit, origin)
        if {H.image(ln) for ln in ps.c_lines} != set(canonical_c_lines(F, fit.n)):
            raise ReconstructionFailed("canonical C-lines do not match", stage="canonicalize")
        for n_lift in (fit.n, fit.n + h):
            T = exponent_adjustment(cfg, n_lift) @ H
            pts = [pg4_to_bb_point(cfg, T(p)) for p in c.c_points]
            law = fit_power_law(cfg, pts, n_lift)
            tried.append({"roles": role, "n_mod_h": fit.n, "n_lift": n_lift,
                          "power_law": law.holds, "hyperoval": law.hyperoval})
            if not (law.holds and law.hyperoval):
                continue
            Tinv = T.inverse()
            spread = Spread(tuple(Tinv.image(ln) for ln in std_regular_spread(cfg)))
            if t_n not in spread or t_inf not in spread:
                raise ReconstructionFailed("pulled-back spread misses a special line",
                                           stage="spread")
            if check_regular and not is_regular(spread):
                raise ReconstructionFailed("pulled-back spread is not regular", stage="spread")
            log.append({"stage": "power_fit", "ok": True, "attempts": tried})
            special = SpecialLines(t_n, t_inf, sl.plus_points, sl.sharp_points,
                                   sl.plus_by_class)
            return ReconstructionResult(special, ps, fit.n, n_lift, T, spread,
                                        law.constant, role, log)
    raise ReconstructionFailed("no role assignment and exponent lift fits",
                               stage="power_fit", detail=tried)
