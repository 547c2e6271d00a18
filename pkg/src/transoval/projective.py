"""Points, subspaces and homographies of PG(n,q), q even, and the Klein map.

Points are plain tuples of field elements, normalized so that the first
nonzero coordinate is 1.  A :class:`Subspace` is stored by the reduced
row-echelon form of a basis, which is canonical, so equal subspaces
compare and hash equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import DimensionError, DomainError
from .field import FieldTable


# -- linear algebra over GF(2^h) ---------------------------------------------

def normalize(F, v):
    """Scale ``v`` so its first nonzero entry is 1."""
    mt = F.mul_table
    q = F.q
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            r = F.inv_table[x] * q
            return tuple(mt[r + y] for y in v)
    raise DomainError("the zero vector is not a projective point")


def rref(F, rows):
    """Reduced row-echelon form.  Returns ``(nonzero_rows, pivot_columns)``."""
    mt = F.mul_table
    inv = F.inv_table
    q = F.q
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = r
        while p < len(m) and m[p][c] == 0:
            p += 1
        if p == len(m):
            continue
        m[r], m[p] = m[p], m[r]
        row = m[r]
        if row[c] != 1:
            s = inv[row[c]] * q
            row = m[r] = [mt[s + x] for x in row]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    fq = f * q
                    m[i] = [x ^ mt[fq + y] for x, y in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F, rows):
    return len(rref(F, rows)[0])


def nullspace(F, rows, ncols):
    """Basis of {x : A x = 0} for the matrix with the given rows."""
    red, piv = rref(F, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        # char 2: x_pivot = sum of row entries at free columns
        for row, pc in zip(red, piv):
            v[pc] = row[fc]
        basis.append(v)
    return basis


def mat_vec(F, M, v):
    mt = F.mul_table
    q = F.q
    out = []
    for row in M:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s ^= mt[a * q + b]
        out.append(s)
    return out


def mat_mul(F, A, B):
    cols = list(zip(*B))
    return [tuple(mat_vec(F, cols, row)) for row in A]


def mat_inv(F, M):
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    red, piv = rref(F, aug)
    if piv[:n] != list(range(n)) or len(red) < n:
        raise DomainError("matrix is singular")
    return [tuple(row[n:]) for row in red]


def identity(n):
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def pack_rows(rows, h):
    """Integer key for a tuple of rows, row-major, h bits per entry."""
    key = 0
    for row in rows:
        for x in row:
            key = (key << h) | x
    return key


def unpack_rows(key, nrows, ncols, h):
    mask = (1 << h) - 1
    flat = []
    for _ in range(nrows * ncols):
        flat.append(key & mask)
        key >>= h
    flat.reverse()
    return tuple(tuple(flat[i * ncols:(i + 1) * ncols]) for i in range(nrows))


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A projective subspace given by its reduced echelon basis.

    The empty subspace has no rows and projective dimension -1.
    """

    rows: tuple
    ncols: int
    F: FieldTable = field(compare=False, repr=False)
    pivots: tuple = field(compare=False, repr=False, default=())

    @property
    def dim(self):
        return len(self.rows) - 1

    @property
    def ambient(self):
        return self.ncols - 1

    def __bool__(self):
        return bool(self.rows)

    def __len__(self):
        return len(self.rows)

    def reduce(self, v):
        """Residue of ``v`` modulo the subspace (zero iff v lies in it)."""
        mt = self.F.mul_table
        q = self.F.q
        v = list(v)
        for row, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                fq = f * q
                v = [x ^ mt[fq + y] for x, y in zip(v, row)]
        return v

    def contains(self, p):
        return not any(self.reduce(p))

    __contains__ = contains

    def contains_subspace(self, other):
        return all(self.contains(r) for r in other.rows)

    def points(self):
        """All points of the subspace, normalized, in enumeration order."""
        if not self.rows:
            return []
        mt = self.F.mul_table
        q = self.F.q
        pts = []
        for coeffs in enumerate_points(self.F, len(self.rows) - 1):
            v = [0] * self.ncols
            for c, row in zip(coeffs, self.rows):
                if c:
                    cq = c * q
                    v = [x ^ mt[cq + y] for x, y in zip(v, row)]
            pts.append(normalize(self.F, v))
        return pts

    def key(self):
        return pack_rows(self.rows, self.F.h)

    def at_infinity(self):
        """True if the subspace lies in the hyperplane x_n = 0."""
        return all(r[-1] == 0 for r in self.rows)

    def to_json(self):
        return [list(r) for r in self.rows]


def subspace(F, rows, ncols=None):
    rows = [list(r) for r in rows]
    if ncols is None:
        if not rows:
            raise DomainError("cannot infer the ambient dimension of an empty span")
        ncols = len(rows[0])
    red, piv = rref(F, rows)
    return Subspace(tuple(tuple(r) for r in red), ncols, F, tuple(piv))


def span(F, *items):
    """Smallest subspace containing the given points and/or subspaces."""
    rows = []
    ncols = None
    for it in items:
        if isinstance(it, Subspace):
            rows.extend(it.rows)
            ncols = it.ncols
        else:
            rows.append(it)
            ncols = len(it)
    return subspace(F, rows, ncols)


def span_points(F, pts):
    pts = list(pts)
    if not pts:
        raise DomainError("span of an empty point set")
    return subspace(F, pts)


def meet(a, b):
    """Intersection of two subspaces (possibly the empty subspace)."""
    if a.ncols != b.ncols:
        raise DimensionError("subspaces live in different ambient spaces")
    F = a.F
    if not a.rows or not b.rows:
        return Subspace((), a.ncols, F)
    eqs = nullspace(F, a.rows, a.ncols)
    if not eqs:
        return b
    # coefficients c with (c . B) E^T = 0
    BE = [[_dot(F, brow, e) for e in eqs] for brow in b.rows]
    # left null space of BE: null space of BE^T
    sols = nullspace(F, list(zip(*BE)), len(b.rows))
    vecs = []
    for c in sols:
        v = [0] * a.ncols
        for ci, brow in zip(c, b.rows):
            if ci:
                v = [x ^ F.mul(ci, y) for x, y in zip(v, brow)]
        vecs.append(v)
    return subspace(F, vecs, a.ncols) if vecs else Subspace((), a.ncols, F)


def join(a, b):
    return span(a.F, a, b)


def meets(a, b):
    """True if the two subspaces share at least one point."""
    return rank(a.F, list(a.rows) + list(b.rows)) < len(a.rows) + len(b.rows)


def _dot(F, u, v):
    mt = F.mul_table
    q = F.q
    s = 0
    for a, b in zip(u, v):
        if a and b:
            s ^= mt[a * q + b]
    return s


def collinear(F, a, b, c):
    return rank(F, [a, b, c]) < 3


def enumerate_points(F, n):
    """All points of PG(n,q), lexicographic on normalized coordinates."""
    if n < 0:
        raise DomainError(f"dimension must be nonnegative, got {n}")
    q = F.q
    pts = []
    for lead in range(n, -1, -1):
        head = (0,) * lead + (1,)
        for tail in product(range(q), repeat=n - lead):
            pts.append(head + tail)
    return pts


def line_frame(F, p0, p1, pinf):
    """2x2 matrix A of PG(1,F) with A(0:1) = p0, A(1:1) = p1, A(1:0) = pinf."""
    # p1 = a*pinf + b*p0
    C = [(pinf[0], p0[0]), (pinf[1], p0[1])]
    a, b = mat_vec(F, mat_inv(F, C), p1)
    if not a or not b:
        raise DomainError("frame points are not distinct")
    return [(F.mul(a, pinf[0]), F.mul(b, p0[0])), (F.mul(a, pinf[1]), F.mul(b, p0[1]))]


def num_points(n, q):
    return (q ** (n + 1) - 1) // (q - 1)


def is_affine(p):
    return p[-1] != 0


# -- homographies ------------------------------------------------------------

@dataclass(frozen=True)
class Homography:
    """x -> M x acting on column coordinate vectors."""

    matrix: tuple
    F: FieldTable = field(compare=False, repr=False)

    def __post_init__(self):
        m = tuple(tuple(r) for r in self.matrix)
        object.__setattr__(self, "matrix", m)
        if rank(self.F, m) != len(m):
            raise DomainError("homography matrix is singular")

    @classmethod
    def identity(cls, F, n):
        return cls(identity(n + 1), F)

    def __call__(self, p):
        return normalize(self.F, mat_vec(self.F, self.matrix, p))

    apply = __call__

    def image(self, s):
        return subspace(self.F, [mat_vec(self.F, self.matrix, r) for r in s.rows], s.ncols)

    def __matmul__(self, other):
        return Homography(mat_mul(self.F, self.matrix, other.matrix), self.F)

    def inverse(self):
        return Homography(mat_inv(self.F, self.matrix), self.F)

    def to_json(self):
        return [list(r) for r in self.matrix]


def apply_homography(H, p):
    return H(p)


# -- Klein correspondence ----------------------------------------------------

_PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (3, 1), (2, 3))


def _solid_rows(ln):
    rows = ln.rows
    if ln.ncols == 5:
        if any(r[4] for r in rows):
            raise DomainError("line is not contained in the hyperplane x4 = 0")
        rows = tuple(r[:4] for r in rows)
    elif ln.ncols != 4:
        raise DimensionError("the Klein map needs a line of PG(3,q)")
    return rows


def klein_map(ln):
    """Plucker image (l01, l02, l03, l12, l31, l23) of a line of PG(3,q).

    Lines of the solid x4 = 0 of PG(4,q) are accepted as well.
    """
    if ln.dim != 1:
        raise DimensionError(f"expected a line, got dimension {ln.dim}")
    F = ln.F
    p, r = _solid_rows(ln)
    mul = F.mul
    # char 2: p_i r_j - p_j r_i = p_i r_j + p_j r_i
    return normalize(F, [mul(p[i], r[j]) ^ mul(p[j], r[i]) for i, j in _PLUCKER_PAIRS])


def klein_form(F, x, y):
    """Polar bilinear form of the Klein quadric."""
    m = F.mul
    return (m(x[0], y[5]) ^ m(x[5], y[0]) ^ m(x[1], y[4]) ^ m(x[4], y[1])
            ^ m(x[2], y[3]) ^ m(x[3], y[2]))


def klein_quadric(F, x):
    m = F.mul
    return m(x[0], x[5]) ^ m(x[1], x[4]) ^ m(x[2], x[3])


def klein_inverse(F, x, ambient=3):
    """Line of PG(3,q) whose Klein image is ``x``.

    With ``ambient=4`` the line is returned inside the solid x4 = 0 of PG(4,q).
    """
    x = normalize(F, x)
    if klein_quadric(F, x):
        raise DomainError(f"{x} is not on the Klein quadric")
    l01, l02, l03, l12, l31, l23 = x
    # symmetric with zero diagonal in char 2; rows span the line
    P = [
        [0, l01, l02, l03],
        [l01, 0, l12, l31],
        [l02, l12, 0, l23],
        [l03, l31, l23, 0],
    ]
    red, _ = rref(F, P)
    if len(red) != 2:
        raise DomainError(f"{x} does not determine a line")
    rows = [r + [0] for r in red] if ambient == 4 else red
    ln = subspace(F, rows, ambient + 1)
    if klein_map(ln) != x:
        raise DomainError(f"{x} does not determine a line")
    return ln
