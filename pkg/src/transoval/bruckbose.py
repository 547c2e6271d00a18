"""Spreads of the solid at infinity and the Bruck-Bose plane P(S).

PG(4,q) has coordinates (x0, ..., x4); the solid at infinity is x4 = 0 and
spread lines are 2-row :class:`Subspace` objects inside it.  A point
(alpha, beta, 1) of PG(2,q^2) corresponds to (a0, a1, b0, b1, 1) where
alpha = a0 + a1 tau and beta = b0 + b1 tau.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import DomainError, SearchExhausted
from .field import Fq2Config
from .projective import (
    Subspace,
    enumerate_points,
    line_frame,
    mat_inv,
    mat_mul,
    mat_vec,
    meet,
    meets,
    normalize,
    rref,
    span,
    subspace,
)


@dataclass(frozen=True)
class Spread:
    """q^2 + 1 pairwise disjoint lines partitioning the solid x4 = 0."""

    lines: tuple
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        lines = tuple(sorted(set(self.lines), key=Subspace.key))
        object.__setattr__(self, "lines", lines)

    @property
    def F(self):
        return self.lines[0].F

    @property
    def q(self):
        return self.F.q

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)

    def __contains__(self, ln):
        return ln in self.index_of

    @property
    def index_of(self):
        if self._index is None:
            object.__setattr__(self, "_index", {ln: i for i, ln in enumerate(self.lines)})
        return self._index

    def line_containing(self, p):
        """The spread line through the point ``p`` of the solid at infinity."""
        for ln in self.lines:
            if ln.contains(p):
                return ln
        raise DomainError(f"{p} is not covered by the spread")

    def problems(self):
        """Violations of the spread axioms (an empty list for a valid spread)."""
        F = self.F
        q = F.q
        out = []
        if len(self.lines) != q * q + 1:
            out.append(f"{len(self.lines)} lines instead of {q * q + 1}")
        for ln in self.lines:
            if ln.dim != 1 or ln.ncols != 5 or not ln.at_infinity():
                out.append(f"{ln.rows} is not a line of the solid at infinity")
        if out:
            return out
        seen = {}
        for i, ln in enumerate(self.lines):
            for p in ln.points():
                if p in seen:
                    out.append(f"lines {seen[p]} and {i} share the point {p}")
                seen[p] = i
        if len(seen) != (q ** 4 - 1) // (q - 1):
            out.append(f"spread covers {len(seen)} points of the solid")
        return out

    def is_valid(self):
        return not self.problems()

    def to_json(self):
        return [ln.to_json() for ln in self.lines]


def solid_line(F, rows):
    return subspace(F, rows, 5)


def std_spread_map(cfg: Fq2Config):
    """delta -> spread line for the standard regular spread (delta None = infinity)."""
    F = cfg.base
    t0, t1 = cfg.t0, cfg.t1
    out = {None: solid_line(F, [(0, 0, 1, 0, 0), (0, 0, 0, 1, 0)])}
    for delta in range(cfg.ext.q):
        d0, d1 = cfg.decompose(delta)
        out[delta] = solid_line(
            F, [(1, 0, d0, d1, 0), (0, 1, F.mul(t0, d1), d0 ^ F.mul(t1, d1), 0)]
        )
    return out


def std_regular_spread(cfg: Fq2Config):
    return Spread(tuple(std_spread_map(cfg).values()))


def bb_point_to_pg4(cfg, p):
    """Affine point (x, y, z) of PG(2,q^2) -> affine point of PG(4,q)."""
    E = cfg.ext
    x, y, z = p
    if z == 0:
        raise DomainError(f"{p} lies on the line at infinity")
    zi = E.inv(z)
    a0, a1 = cfg.decompose(E.mul(x, zi))
    b0, b1 = cfg.decompose(E.mul(y, zi))
    return (a0, a1, b0, b1, 1)


def pg4_to_bb_point(cfg, P):
    """Inverse of :func:`bb_point_to_pg4`."""
    F = cfg.base
    if P[4] == 0:
        raise DomainError(f"{P} is a point at infinity")
    P = normalize_affine(F, P)
    return (cfg.compose(P[0], P[1]), cfg.compose(P[2], P[3]), 1)


def normalize_affine(F, P):
    """Scale an affine point so its last coordinate is 1."""
    if P[4] == 0:
        raise DomainError(f"{P} is a point at infinity")
    if P[4] == 1:
        return tuple(P)
    s = F.inv(P[4])
    return tuple(F.mul(s, x) for x in P)


def bb_lines_through(P, s: Spread):
    """The q^2 + 1 lines of P(S) through the affine point ``P``."""
    if P[-1] == 0:
        raise DomainError(f"{P} is not an affine point")
    F = s.F
    return [span(F, P, ln) for ln in s.lines]


# -- reguli ------------------------------------------------------------------

def _check_skew(lines):
    for a, b in combinations(lines, 2):
        if meets(a, b):
            raise DomainError("regulus generators must be pairwise disjoint")


def transversals(l1, l2, l3):
    """The q + 1 lines meeting each of three pairwise skew lines."""
    _check_skew((l1, l2, l3))
    F = l1.F
    out = []
    for P in l1.points():
        Q = meet(span(F, P, l2), l3)
        if Q.dim != 0:
            raise DomainError("the three lines do not lie in a common solid")
        out.append(span(F, P, Q))
    return tuple(sorted(out, key=Subspace.key))


def opposite_regulus(l1, l2, l3):
    return transversals(l1, l2, l3)


def regulus(l1, l2, l3):
    """The regulus through three pairwise skew lines (sorted by key)."""
    t = transversals(l1, l2, l3)
    return transversals(t[0], t[1], t[2])


def reverse_regulus(s: Spread, r):
    """Replace the regulus ``r`` of ``s`` by its opposite regulus."""
    r = tuple(r)
    if not all(ln in s for ln in r):
        raise DomainError("regulus is not contained in the spread")
    opp = opposite_regulus(*r[:3])
    drop = set(r)
    return Spread(tuple(ln for ln in s.lines if ln not in drop) + opp)


def is_regular(s: Spread):
    """True iff the regulus through any three lines of ``s`` lies in ``s``."""
    idx = s.index_of
    n = len(s.lines)
    covered = {}
    for i, j, k in combinations(range(n), 3):
        if covered.get((i, j), 0) >> k & 1:
            continue
        reg = regulus(s.lines[i], s.lines[j], s.lines[k])
        members = []
        for ln in reg:
            m = idx.get(ln)
            if m is None:
                return False
            members.append(m)
        members.sort()
        mask = 0
        for m in members:
            mask |= 1 << m
        for a, b in combinations(members, 2):
            covered[(a, b)] = covered.get((a, b), 0) | mask
    return True


def reguli_of(s: Spread, avoid=()):
    """Every regulus contained in ``s`` that avoids the lines in ``avoid``.

    Reguli come out in order of their lexicographically first generating
    triple; each is a tuple of lines sorted by key.
    """
    avoid = set(avoid)
    lines = [ln for ln in s.lines if ln not in avoid]
    pos = {ln: i for i, ln in enumerate(lines)}
    seen = set()
    covered = {}
    for i, j, k in combinations(range(len(lines)), 3):
        if covered.get((i, j), 0) >> k & 1:
            continue
        reg = regulus(lines[i], lines[j], lines[k])
        members = [pos.get(ln) for ln in reg]
        if None in members:
            continue
        members.sort()
        mask = 0
        for m in members:
            mask |= 1 << m
        for a, b in combinations(members, 2):
            covered[(a, b)] = covered.get((a, b), 0) | mask
        if reg not in seen:
            seen.add(reg)
            yield reg


# -- GF(q^2)-coordinates of a regular spread ---------------------------------

def coordinatize_regular_spread(s: Spread, cfg: Fq2Config, t_zero, t_inf, unit=None):
    """Label the lines of a regular spread by PG(1,q^2).

    Returns a dict line -> delta with ``t_zero`` -> 0, ``t_inf`` -> None
    (the point at infinity) and ``unit`` -> 1, such that reguli of ``s``
    correspond to Baer sublines.  On the standard regular spread with
    t_zero = p_0, t_inf = p_infinity, unit = p_1 the labels agree with
    :func:`std_spread_map` up to the automorphism x -> x^q.
    """
    F = cfg.base
    if t_zero not in s or t_inf not in s:
        raise DomainError("labelled lines must belong to the spread")
    others = [ln for ln in s.lines if ln != t_zero and ln != t_inf]
    unit = others[0] if unit is None else unit
    basis = [r[:4] for r in t_zero.rows] + [r[:4] for r in t_inf.rows]
    Pinv_t = list(zip(*mat_inv(F, basis)))

    def graph(ln):
        rows = [mat_vec(F, Pinv_t, r[:4]) for r in ln.rows]
        red, piv = rref(F, rows)
        if piv != [0, 1]:
            raise DomainError("spread lines must be disjoint from the labelled lines")
        return [tuple(red[0][2:]), tuple(red[1][2:])]

    Uinv = mat_inv(F, graph(unit))
    G = {ln: mat_mul(F, graph(ln), Uinv) for ln in others}
    t0, t1 = cfg.t0, cfg.t1
    T = None
    for ln in others:
        M = G[ln]
        M2 = mat_mul(F, M, M)
        rhs = [tuple(F.mul(t1, M[i][j]) ^ (t0 if i == j else 0) for j in range(2))
               for i in range(2)]
        if M2 == rhs:
            T = M
            break
    if T is None or T[0][1] == 0:
        raise DomainError("spread is not regular")
    out = {t_zero: 0, t_inf: None}
    for ln in others:
        M = G[ln]
        w0, w1 = M[0]
        c1 = F.div(w1, T[0][1])
        c0 = w0 ^ F.mul(c1, T[0][0])
        expect = [tuple(F.mul(c1, T[i][j]) ^ (c0 if i == j else 0) for j in range(2))
                  for i in range(2)]
        if M != expect:
            raise DomainError("spread is not regular")
        out[ln] = cfg.compose(c0, c1)
    return out


def _pg1(delta):
    return (1, 0) if delta is None else (delta, 1)


def baer_conjugate(cfg, frame, x):
    """Image of ``x`` under the Baer involution fixing the subline through ``frame``.

    ``frame`` holds three points of PG(1,q^2) (labels, None = infinity).
    """
    E = cfg.ext
    A = line_frame(E, *[_pg1(d) for d in frame])
    Ainv = mat_inv(E, A)
    y = mat_vec(E, Ainv, _pg1(x))
    y = [cfg.conj(c) for c in y]
    z = normalize(E, mat_vec(E, A, y))
    return None if z[1] == 0 else E.div(z[0], z[1])


def conjugate_derivation_regulus(s: Spread, cfg: Fq2Config, t_n, t_inf):
    """First regulus of ``s`` avoiding t_n, t_inf whose Baer involution swaps them.

    Requires q = 2^h with h even.
    """
    if cfg.h % 2:
        raise DomainError(f"derivation experiment needs h even, got h={cfg.h}")
    labels = coordinatize_regular_spread(s, cfg, t_inf, t_n)
    for reg in reguli_of(s, avoid=(t_n, t_inf)):
        frame = [labels[ln] for ln in reg[:3]]
        if baer_conjugate(cfg, frame, 0) is None:
            return reg
    raise SearchExhausted("no regulus has t_N and t_inf as conjugate points")


# -- the plane P(S) ----------------------------------------------------------

class BBPlane:
    """Incidence structure of the translation plane P(S).

    Points are affine points of PG(4,q) and the lines of S; lines are the
    affine planes through a spread line, plus the line at infinity.
    """

    def __init__(self, spread: Spread):
        self.spread = spread
        self.F = spread.F

    def line_key(self, P, ln):
        """Key identifying the plane <P, ln> among the planes through ``ln``."""
        return normalize(self.F, ln.reduce(P))

    def line(self, P, ln):
        return span(self.F, P, ln)

    def line_through(self, P, Q):
        """The line of P(S) through two affine points."""
        F = self.F
        d = meet(span(F, P, Q), solid_at_infinity(F))
        return span(F, P, self.spread.line_containing(d.rows[0]))

    def affine_points(self):
        return [p for p in enumerate_points(self.F, 4) if p[4]]

    def max_points_on_line(self, pts, extra=()):
        """Largest number of ``pts`` on one line of P(S).

        ``extra`` lists spread lines counted as additional points (they lie
        on every plane through them and on the line at infinity).
        """
        extra = set(extra)
        best = len(extra)
        for ln in self.spread.lines:
            counts = {}
            for P in pts:
                k = self.line_key(P, ln)
                counts[k] = counts.get(k, 0) + 1
            if counts:
                best = max(best, max(counts.values()) + (ln in extra))
        return best


def solid_at_infinity(F):
    return subspace(F, [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0), (0, 0, 0, 1, 0)], 5)
