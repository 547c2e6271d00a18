"""Translation hyperovals of PG(2,q^2) and their C-points/C-planes in PG(4,q)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import kernels
from .bruckbose import bb_point_to_pg4, solid_at_infinity, std_spread_map
from .errors import DomainError, InvalidExponent, NotCompletable
from .field import Fq2Config
from .projective import Subspace, meet, meets, normalize, span, unpack_rows

P_INF = (1, 0, 0)
NUCLEUS = (0, 1, 0)


@dataclass(frozen=True)
class OvalSpec:
    """Translation oval {(s t^(2^n), s t, 1)} of PG(2,q^2) with its two points at infinity."""

    cfg: Fq2Config
    n: int
    s: int = 1

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"exponent must be nonnegative, got {self.n}")
        if self.s == 0 or self.s >= self.cfg.ext.q:
            raise DomainError(f"scale must be a nonzero element of GF(q^2), got {self.s}")


def oval_points(spec: OvalSpec):
    """The q^2 + 2 points, affine ones ordered by the parameter t, then P_inf, N."""
    E = spec.cfg.ext
    pts = [(E.mul(spec.s, E.frob(t, spec.n)), E.mul(spec.s, t), 1) for t in range(E.q)]
    return pts + [P_INF, NUCLEUS]


def plane_line(E, a, b):
    """Line of PG(2,E) through two distinct points, as normalized coordinates."""
    m = E.mul
    return normalize(E, (
        m(a[1], b[2]) ^ m(a[2], b[1]),
        m(a[0], b[2]) ^ m(a[2], b[0]),
        m(a[0], b[1]) ^ m(a[1], b[0]),
    ))


def find_collinear_triple(E, pts):
    """Three collinear points of PG(2,E) among ``pts``, or None."""
    seen = {}
    for i, j in combinations(range(len(pts)), 2):
        ln = plane_line(E, pts[i], pts[j])
        prev = seen.setdefault(ln, (i, j))
        if prev != (i, j):
            k = prev[0] if prev[0] not in (i, j) else prev[1]
            return pts[i], pts[j], pts[k]
    return None


def gen_translation_hyperoval(spec: OvalSpec):
    pts = oval_points(spec)
    bad = find_collinear_triple(spec.cfg.ext, pts)
    if bad is not None:
        raise InvalidExponent(
            f"t -> t^(2^{spec.n}) over GF({spec.cfg.ext.q}) is not an arc: {bad} are collinear"
        )
    return pts


@dataclass(frozen=True)
class Configuration:
    """C-points (affine points of PG(4,q)) and C-planes."""

    cfg: Fq2Config
    c_points: tuple
    c_planes: tuple

    @property
    def q(self):
        return self.cfg.q

    @property
    def F(self):
        return self.cfg.base

    def points_on(self, plane):
        return [p for p in self.c_points if plane.contains(p)]


def find_collinear_in_subspace(F, pts):
    """Three collinear points among ``pts`` (projective points over F), or None."""
    seen = {}
    for i, j in combinations(range(len(pts)), 2):
        ln = span(F, pts[i], pts[j])
        prev = seen.setdefault(ln, (i, j))
        if prev != (i, j):
            k = prev[0] if prev[0] not in (i, j) else prev[1]
            return pts[i], pts[j], pts[k]
    return None


def planes_with_points(F, pts, keep=None, threads=1, backend=None):
    """Planes spanned by triples of ``pts``, mapped to how many of ``pts`` they hold.

    ``keep`` filters on the point count before planes are materialized.
    """
    keys, npoints = kernels.plane_point_counts(F, pts, threads=threads, backend=backend)
    ncols = len(pts[0])
    out = {}
    for key, k in zip(keys.tolist(), npoints.tolist()):
        if keep is None or keep(k):
            out[subspace_from_key(F, key, 3, ncols)] = k
    return out


def subspace_from_key(F, key, nrows, ncols):
    rows = unpack_rows(key, nrows, ncols, F.h)
    pivots = tuple(next(c for c, x in enumerate(r) if x) for r in rows)
    return Subspace(rows, ncols, F, pivots)


def forward_construct(spec: OvalSpec, threads=1, backend=None):
    """C-points and C-planes in PG(4,q) of the translation oval ``spec``.

    C-planes are the planes holding q C-points whose line at infinity meets
    both spread lines p_0 and p_infinity, i.e. the Baer subplanes through
    P_inf and N.  For q >= 8 the point count alone already forces this; at
    q = 4 the four-point planes of the other kind must be filtered out.
    """
    cfg = spec.cfg
    q = cfg.q
    if q < 4:
        raise DomainError("C-planes need q > 2")
    oval = gen_translation_hyperoval(spec)
    c_points = tuple(sorted(normalize(cfg.base, bb_point_to_pg4(cfg, p)) for p in oval if p[2]))
    spread = std_spread_map(cfg)
    t_inf, t_n = spread[0], spread[None]
    planes = planes_with_points(cfg.base, c_points, keep=lambda k: k == q,
                                threads=threads, backend=backend)
    c_planes = tuple(sorted(
        (pl for pl in planes if meets(pl, t_inf) and meets(pl, t_n)), key=Subspace.key
    ))
    return Configuration(cfg, c_points, c_planes)


def hyperoval_completion(F, plane, arc):
    """The two points completing a q-arc of a plane to a hyperoval."""
    q = F.q
    if q <= 2:
        raise DomainError("completion needs q > 2")
    arc = [normalize(F, p) for p in arc]
    if plane.dim != 2 or not all(plane.contains(p) for p in arc):
        raise DomainError("arc must lie in the given plane")
    if len(arc) != q or find_collinear_in_subspace(F, arc) is not None:
        raise DomainError("input is not a q-arc")
    on_secant = set(arc)
    for a, b in combinations(arc, 2):
        on_secant.update(span(F, a, b).points())
    found = [p for p in plane.points() if p not in on_secant]
    if len(found) != 2:
        raise NotCompletable(f"{len(found)} completion points instead of 2")
    return tuple(sorted(found))


@dataclass(frozen=True)
class SecantDistribution:
    """Lines of a plane through X, grouped by how many arc points they carry.

    ``counts[k]`` is the number of k-secants through X.  ``on_infinity_line``
    records whether X lies on the plane's line at infinity.
    """

    counts: dict
    on_infinity_line: bool

    def lemma_case(self, q):
        """Which of the three completion-lemma patterns the counts follow (1, 2, 3 or None)."""
        c = {k: v for k, v in self.counts.items() if v}
        if self.on_infinity_line and c == {1: q, 0: 1}:
            return 1
        if self.on_infinity_line and c == {2: q // 2, 0: q // 2 + 1}:
            return 2
        if not self.on_infinity_line and c == _case3(q):
            return 3
        return None


def _case3(q):
    out = {2: q // 2 - 1, 1: 2, 0: q // 2}
    return {k: v for k, v in out.items() if v}


def secant_distribution(F, X, plane, arc, infinity_line=None):
    """Secant counts of the lines of ``plane`` through ``X`` w.r.t. ``arc``.

    ``infinity_line`` defaults to the intersection of the plane with x4 = 0.
    """
    X = normalize(F, X)
    arc = [normalize(F, p) for p in arc]
    if X in arc:
        raise DomainError(f"{X} lies on the arc")
    if not plane.contains(X):
        raise DomainError(f"{X} is not in the plane")
    if infinity_line is None:
        infinity_line = meet(plane, solid_at_infinity(F))
    hits = {}
    for P in arc:
        ln = span(F, X, P)
        hits[ln] = hits.get(ln, 0) + 1
    counts = {0: F.q + 1 - len(hits), 1: 0, 2: 0}
    for k in hits.values():
        counts[k] = counts.get(k, 0) + 1
    return SecantDistribution(counts, infinity_line.contains(X))
