"""Arithmetic in GF(2^h) and in its quadratic extension GF(q^2).

Elements of GF(q) are integers in ``range(q)`` read as polynomials over
GF(2) (bit i is the coefficient of x^i).  Addition is XOR.

Elements of GF(q^2) are encoded in the basis {1, tau}: the integer
``a0 | (a1 << h)`` stands for ``a0 + a1*tau`` with ``a0, a1`` in GF(q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .errors import DomainError

# Fixed primitive polynomials keep integer encodings stable between runs.
PRIMITIVE_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011101,
}


class FieldTable:
    """Log/antilog tables for a field of order 2^h.

    Use :meth:`from_poly` for GF(2^h) in the polynomial basis; the
    quadratic extension built by :class:`Fq2Config` reuses this class
    with a different encoding of the same elements.
    """

    def __init__(self, h, exp, poly=None):
        self.h = h
        self.q = 1 << h
        self.poly = poly
        q = self.q
        order = q - 1
        if len(exp) != order or len(set(exp)) != order or 0 in exp:
            raise DomainError("generator powers do not cover the nonzero elements")
        self.exp = tuple(exp) + tuple(exp)
        log = [-1] * q
        for i, v in enumerate(exp):
            log[v] = i
        self.log = tuple(log)
        mul = [0] * (q * q)
        for a in range(1, q):
            la = log[a]
            row = a * q
            for b in range(1, q):
                mul[row + b] = self.exp[la + log[b]]
        # flat q*q table; row a starts at a*q
        self.mul_table = mul
        inv = [0] * q
        for a in range(1, q):
            inv[a] = self.exp[(order - log[a]) % order]
        self.inv_table = tuple(inv)

    @classmethod
    def from_poly(cls, h, poly=None):
        if h < 1:
            raise DomainError(f"h must be positive, got {h}")
        if poly is None:
            try:
                poly = PRIMITIVE_POLYS[h]
            except KeyError:
                raise DomainError(f"no built-in primitive polynomial for h={h}") from None
        if poly >> h != 1:
            raise DomainError(f"polynomial {poly:#b} does not have degree {h}")
        q = 1 << h
        exp = []
        x = 1
        for _ in range(q - 1):
            exp.append(x)
            x <<= 1
            if x & q:
                x ^= poly
        if x != 1 or len(set(exp)) != q - 1:
            raise DomainError(f"polynomial {poly:#b} is not primitive")
        return cls(h, exp, poly)

    def __repr__(self):
        return f"FieldTable(h={self.h}, poly={self.poly})"

    def __eq__(self, other):
        return isinstance(other, FieldTable) and self.exp == other.exp

    def __hash__(self):
        return hash(self.exp)

    def elements(self):
        return range(self.q)

    def mul(self, a, b):
        return self.mul_table[a * self.q + b]

    def inv(self, a):
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if a == 0:
            if k < 0:
                raise DomainError("zero has no multiplicative inverse")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def frob(self, a, n):
        """Return ``a ** (2 ** n)``."""
        if a == 0:
            return 0
        order = self.q - 1
        return self.exp[(self.log[a] * pow(2, n, order)) % order]

    def order(self, a):
        if a == 0:
            raise DomainError("zero has no multiplicative order")
        return (self.q - 1) // gcd(self.log[a], self.q - 1)

    def sqrt(self, a):
        return self.frob(a, self.h - 1)


# Module-level spellings of the basic operations.
def gf_mul(F, a, b):
    return F.mul(a, b)


def gf_inv(F, a):
    return F.inv(a)


def frob_pow(F, a, n):
    return F.frob(a, n)


@dataclass(frozen=True)
class Fq2Config:
    """GF(q^2) presented as GF(q)[tau] with tau^2 = t1*tau + t0."""

    base: FieldTable
    t1: int
    t0: int
    ext: FieldTable = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        F = self.base
        h = F.h
        exp = []
        a0, a1 = 1, 0
        for _ in range(F.q * F.q - 1):
            exp.append(a0 | (a1 << h))
            # (a0 + a1 tau) tau = a1 t0 + (a0 + a1 t1) tau
            a0, a1 = F.mul(a1, self.t0), a0 ^ F.mul(a1, self.t1)
        if (a0, a1) != (1, 0) or len(set(exp)) != len(exp):
            raise DomainError(
                f"x^2 + {self.t1}x + {self.t0} is not primitive over GF({F.q})"
            )
        object.__setattr__(self, "ext", FieldTable(2 * h, exp))

    @property
    def h(self):
        return self.base.h

    @property
    def q(self):
        return self.base.q

    @property
    def tau(self):
        return self.base.q

    def decompose(self, alpha):
        """Split ``alpha`` into ``(a0, a1)`` with alpha = a0 + a1*tau."""
        return alpha & (self.q - 1), alpha >> self.h

    def compose(self, a0, a1):
        return a0 | (a1 << self.h)

    def embed(self, a):
        """GF(q) element as an element of GF(q^2)."""
        return a

    def in_base(self, alpha):
        return alpha >> self.h == 0

    def conj(self, alpha):
        """The involutory automorphism alpha -> alpha^q."""
        return self.ext.frob(alpha, self.h)

    def to_json(self):
        return {"h": self.h, "gf_poly": self.base.poly, "t1": self.t1, "t0": self.t0}


def fq2_decompose(cfg, alpha):
    return cfg.decompose(alpha)


def fq2_compose(cfg, a0, a1):
    return cfg.compose(a0, a1)


def find_primitive_quadratic(base):
    """Lexicographically least (t1, t0) with x^2 + t1 x + t0 primitive."""
    for t1 in range(base.q):
        for t0 in range(1, base.q):
            try:
                return Fq2Config(base, t1, t0)
            except DomainError:
                continue
    raise AssertionError("unreachable: a primitive quadratic always exists")


@lru_cache(maxsize=None)
def standard_config(h):
    """The default Fq2Config for q = 2^h used by fixtures and the CLI."""
    return find_primitive_quadratic(FieldTable.from_poly(h))


def config_for_q(q):
    h = q.bit_length() - 1
    if q < 2 or 1 << h != q:
        raise DomainError(f"q must be a power of two, got {q}")
    return standard_config(h)
