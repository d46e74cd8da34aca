"""SL(2) over the p-adic field and its metaplectic double cover.

The cover multiplies as (g1, z1)(g2, z2) = (g1 g2, z1 z2 c(g1, g2)) with the
Kubota cocycle

    c(g1, g2) = (x(g1), x(g2)) * (-x(g1) x(g2), x(g1 g2)),

x(g) the lower-left entry when nonzero, else the lower-right.  Matrix
decompositions (Iwasawa, big cell, B times lower-unipotent membership) are
provided here because every integral downstream factors through them.
"""

from __future__ import annotations

from .errors import NotInDomain, NotInMaximalCompact
from .padic import PadicConfig, PadicScalar, hilbert_symbol


class Sl2Element:
    """Unimodular 2x2 matrix over the p-adic field."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: PadicScalar, b: PadicScalar, c: PadicScalar,
                 d: PadicScalar, check: bool = True):
        self.a, self.b, self.c, self.d = a, b, c, d
        if check:
            one = PadicScalar.from_int(a.config, 1)
            if not (a * d - b * c) == one:
                raise NotInDomain("determinant is not 1 at carried precision")

    @property
    def config(self) -> PadicConfig:
        return self.a.config

    @classmethod
    def identity(cls, cfg: PadicConfig) -> "Sl2Element":
        one = PadicScalar.from_int(cfg, 1)
        zero = PadicScalar.zero(cfg)
        return cls(one, zero, zero, one, check=False)

    @classmethod
    def w(cls, cfg: PadicConfig) -> "Sl2Element":
        """The Weyl element ((0, 1), (-1, 0))."""
        one = PadicScalar.from_int(cfg, 1)
        zero = PadicScalar.zero(cfg)
        return cls(zero, one, -one, zero, check=False)

    @classmethod
    def torus(cls, a: PadicScalar) -> "Sl2Element":
        zero = PadicScalar.zero(a.config)
        return cls(a, zero, zero, a.inverse(), check=False)

    @classmethod
    def upper(cls, b: PadicScalar) -> "Sl2Element":
        one = PadicScalar.from_int(b.config, 1)
        zero = PadicScalar.zero(b.config)
        return cls(one, b, zero, one, check=False)

    @classmethod
    def lower(cls, x: PadicScalar) -> "Sl2Element":
        one = PadicScalar.from_int(x.config, 1)
        zero = PadicScalar.zero(x.config)
        return cls(one, zero, x, one, check=False)

    def __mul__(self, other: "Sl2Element") -> "Sl2Element":
        return Sl2Element(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            check=False)

    def inverse(self) -> "Sl2Element":
        return Sl2Element(self.d, -self.b, -self.c, self.a, check=False)

    def __eq__(self, other):
        if not isinstance(other, Sl2Element):
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def is_integral(self) -> bool:
        return all(e.is_zero or e.valuation >= 0
                   for e in (self.a, self.b, self.c, self.d))

    def in_congruence_subgroup(self, level: int) -> bool:
        """Whether the matrix lies in 1 + p^level M_2(O)."""
        one = PadicScalar.from_int(self.config, 1)
        for e, target in ((self.a, one), (self.b, None),
                          (self.c, None), (self.d, one)):
            diff = e - target if target is not None else e
            if not diff.is_zero and diff.valuation < level:
                return False
        return True

    def max_entry_depth(self) -> int:
        """max(0, -v(entry)) over the four entries."""
        depth = 0
        for e in (self.a, self.b, self.c, self.d):
            if not e.is_zero:
                depth = max(depth, -e.valuation)
        return depth

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def x_invariant(g: Sl2Element) -> PadicScalar:
    """Lower-left entry when nonzero, else lower-right."""
    return g.d if g.c.is_zero else g.c


def cocycle(g1: Sl2Element, g2: Sl2Element) -> int:
    x1 = x_invariant(g1)
    x2 = x_invariant(g2)
    x12 = x_invariant(g1 * g2)
    return hilbert_symbol(x1, x2) * hilbert_symbol(-(x1 * x2), x12)


class MetaElement:
    """Element (g, zeta) of the double cover, zeta in {+1, -1}."""

    __slots__ = ("g", "zeta")

    def __init__(self, g: Sl2Element, zeta: int = 1):
        if zeta not in (1, -1):
            raise ValueError("sign must be +-1")
        self.g = g
        self.zeta = zeta

    @classmethod
    def lift(cls, g: Sl2Element) -> "MetaElement":
        return cls(g, 1)

    def __mul__(self, other: "MetaElement") -> "MetaElement":
        return MetaElement(self.g * other.g,
                           self.zeta * other.zeta * cocycle(self.g, other.g))

    def inverse(self) -> "MetaElement":
        ginv = self.g.inverse()
        return MetaElement(ginv, self.zeta * cocycle(self.g, ginv))

    def __eq__(self, other):
        if not isinstance(other, MetaElement):
            return NotImplemented
        return self.zeta == other.zeta and self.g == other.g

    def __repr__(self):
        return f"({self.g}, {self.zeta:+d})"


def meta_mul(a: MetaElement, b: MetaElement) -> MetaElement:
    return a * b


def meta_inv(a: MetaElement) -> MetaElement:
    return a.inverse()


def meta_product(factors: list[MetaElement]) -> MetaElement:
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return out


def kubota_splitting(k: Sl2Element) -> int:
    """Splitting sign s(k) of the maximal compact: (c, d)_F when 0<|c|<1.

    k -> (k, s(k)) is a homomorphism into the cover (enforced by test, not
    assumed).
    """
    if not k.is_integral():
        raise NotInMaximalCompact("entries are not all integral")
    one = PadicScalar.from_int(k.config, 1)
    if not (k.a * k.d - k.b * k.c) == one:
        raise NotInMaximalCompact("determinant is not 1")
    if k.c.is_zero or k.c.valuation == 0:
        return 1
    return hilbert_symbol(k.c, k.d)


def meta_lift_compact(k: Sl2Element) -> MetaElement:
    return MetaElement(k, kubota_splitting(k))


def iwasawa_decompose(g: Sl2Element):
    """g = n(u) t(a) k with k integral of determinant 1.

    If |g21| <= |g22| the reduction uses the d-entry directly and k is lower
    unipotent; otherwise the same reduction is applied to g*w.
    Returns (u, a, k).
    """
    cfg = g.config
    c, d = g.c, g.d
    if c.is_zero or (not d.is_zero and c.valuation >= d.valuation):
        u = g.b / d
        a = d.inverse()
        k = Sl2Element.lower(c / d)
        return u, a, k
    gw = g * Sl2Element.w(cfg)
    u, a, k1 = iwasawa_decompose(gw)
    return u, a, k1 * Sl2Element.w(cfg).inverse()


def b_nbar_membership(g: Sl2Element, depth: int):
    """If g = n(u) t(a) nbar(x) with v(x) >= depth, return (a, x); else None.

    The B-part torus coordinate is a = g22^-1.
    """
    if g.d.is_zero:
        return None
    x = g.c / g.d
    if not x.is_zero and x.valuation < depth:
        return None
    return g.d.inverse(), x


def kappa_twist(g: Sl2Element, kappa: PadicScalar) -> Sl2Element:
    """Conjugation by diag(kappa, 1): scales b by kappa, c by kappa^-1."""
    if kappa.is_zero:
        raise NotInDomain("twist parameter must be nonzero")
    return Sl2Element(g.a, kappa * g.b, g.c / kappa, g.d, check=False)
