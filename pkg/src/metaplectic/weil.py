"""Schwartz-Bruhat functions as finite lattice tables and the genuine Weil
representation of the double cover acting on them.

A LatticeFunction is supported in p^-N O and constant on cosets of p^M O;
the table is sparse over the q^(N+M) coset representatives x = p^-N t.
Generator actions follow the standard formulas

    w     |->  gamma(psi) * Fourier transform   (kernel psi(2xy), vol(O)=1)
    n(b)  |->  multiplication by psi(b x^2)
    t(a)  |->  |a|^(1/2) mu_psi(a) f(a x)
    zeta  |->  scalar zeta

and a general cover element acts through a Bruhat factorization whose sign
corrections are computed with the cocycle machinery, never by hand.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DepthExceeded, LatticeOverflow, PrecisionExhausted
from .padic import PadicScalar, int_valuation
from .scalars import (Cyclotomic, GradedScalar, ScalarContext, gamma_psi,
                      weil_index_mu)
from .sl2 import MetaElement, Sl2Element, meta_product

DEFAULT_MAX_CELLS = 400_000


class LatticeFunction:
    """Sparse table model of a Bruhat-Schwartz function on F.

    ``flavor`` is +1 for the character psi and -1 for its inverse; it fixes
    the kernel used by both the Fourier transform and the n(b) action.
    """

    __slots__ = ("ctx", "flavor", "N", "M", "values")

    def __init__(self, ctx: ScalarContext, flavor: int, N: int, M: int,
                 values: dict[int, GradedScalar], trim: bool = True):
        if flavor not in (1, -1):
            raise ValueError("flavor must be +-1")
        if N + M < 0:
            raise ValueError("lattice has negative index span")
        self.ctx = ctx
        self.flavor = flavor
        self.N = N
        self.M = M
        self.values = {t: v for t, v in values.items() if not v.is_zero()}
        if trim:
            self._trim()

    # -- canonical form ----------------------------------------------------

    def _trim(self):
        p = self.ctx.p
        if not self.values:
            self.N = 0
            self.M = 0
            return
        # shrink support: drop unused negative-valuation shells
        val_min = min((int_valuation(t, p) if t else self.N + self.M)
                      for t in self.values)
        shrink = min(val_min, self.N + self.M)
        if shrink > 0 and self.N + self.M - shrink >= 0:
            ps = p ** shrink
            self.values = {t // ps: v for t, v in self.values.items()}
            self.N -= shrink
        # coarsen constancy while every p-block is uniform
        while self.N + self.M > 0:
            span = p ** (self.N + self.M - 1)
            blocks: dict[int, list] = {}
            for t, v in self.values.items():
                blocks.setdefault(t % span, []).append(v)
            ok = True
            for rep, vals in blocks.items():
                if len(vals) != p:
                    ok = False
                    break
                if any(not (v == vals[0]) for v in vals[1:]):
                    ok = False
                    break
            if not ok:
                break
            self.values = {rep: vals[0] for rep, vals in blocks.items()}
            self.M -= 1

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, ctx, flavor: int = -1) -> "LatticeFunction":
        return cls(ctx, flavor, 0, 0, {}, trim=False)

    @classmethod
    def char_integers(cls, ctx, flavor: int = -1) -> "LatticeFunction":
        """Characteristic function of O."""
        return cls(ctx, flavor, 0, 0, {0: GradedScalar.one(ctx)}, trim=False)

    @classmethod
    def char_ball(cls, ctx, exponent: int, flavor: int = -1):
        """Characteristic function of p^exponent O."""
        return cls(ctx, flavor, -exponent, exponent,
                   {0: GradedScalar.one(ctx)}, trim=False)

    @classmethod
    def phi_m(cls, ctx, m: int, flavor: int = -1) -> "LatticeFunction":
        """Characteristic function of 1 + P^m (N = 0, M = m)."""
        if m < 1:
            raise ValueError("m must be >= 1")
        return cls(ctx, flavor, 0, m, {1: GradedScalar.one(ctx)}, trim=False)

    # -- basic queries -------------------------------------------------

    def span(self) -> int:
        return self.N + self.M

    def cells(self) -> int:
        return self.ctx.p ** self.span()

    def is_zero(self) -> bool:
        return not self.values

    def evaluate(self, x: PadicScalar) -> GradedScalar:
        if x.is_zero:
            return self.values.get(0, GradedScalar.zero(self.ctx))
        if x.valuation < -self.N:
            return GradedScalar.zero(self.ctx)
        digits = self.M - x.valuation
        if digits > x.precision:
            raise PrecisionExhausted("argument digits below lattice mesh")
        p = self.ctx.p
        span = p ** (self.N + self.M)
        if digits <= 0:
            t = 0
        else:
            t = x.unit_mod(digits) * p ** (x.valuation + self.N) % span
        return self.values.get(t, GradedScalar.zero(self.ctx))

    def refine(self, N2: int, M2: int,
               max_cells: int = DEFAULT_MAX_CELLS) -> "LatticeFunction":
        """Re-express on the finer lattice (N2 >= N, M2 >= M)."""
        if N2 < self.N or M2 < self.M:
            raise ValueError("refine only goes finer")
        p = self.ctx.p
        if p ** (N2 + M2) > max_cells:
            raise LatticeOverflow(
                f"lattice span {N2 + M2} exceeds {max_cells} cells")
        shift = p ** (N2 - self.N)
        span2 = p ** (N2 + M2)
        block = p ** (N2 + self.M)
        reps = p ** (M2 - self.M)
        out = {}
        for t, v in self.values.items():
            base = t * shift
            for j in range(reps):
                out[(base + j * block) % span2] = v
        return LatticeFunction(self.ctx, self.flavor, N2, M2, out, trim=False)

    def __add__(self, other: "LatticeFunction") -> "LatticeFunction":
        if self.flavor != other.flavor:
            raise ValueError("mixed character flavors")
        N2, M2 = max(self.N, other.N), max(self.M, other.M)
        f1 = self.refine(N2, M2)
        f2 = other.refine(N2, M2)
        out = dict(f1.values)
        for t, v in f2.values.items():
            s = out.get(t)
            out[t] = v if s is None else s + v
        return LatticeFunction(self.ctx, self.flavor, N2, M2, out)

    def __sub__(self, other):
        return self + other.scale_rational(-1)

    def scale(self, g: GradedScalar) -> "LatticeFunction":
        return LatticeFunction(self.ctx, self.flavor, self.N, self.M,
                               {t: v * g for t, v in self.values.items()},
                               trim=False)

    def scale_rational(self, r) -> "LatticeFunction":
        return LatticeFunction(self.ctx, self.flavor, self.N, self.M,
                               {t: v.scale(r) for t, v in self.values.items()},
                               trim=False)

    def negate_argument(self) -> "LatticeFunction":
        span = self.ctx.p ** (self.N + self.M)
        return LatticeFunction(self.ctx, self.flavor, self.N, self.M,
                               {(-t) % span: v
                                for t, v in self.values.items()}, trim=False)

    def __eq__(self, other):
        if not isinstance(other, LatticeFunction):
            return NotImplemented
        if self.flavor != other.flavor:
            return False
        a, b = self.tightened(), other.tightened()
        return a.N == b.N and a.M == b.M and a.values == b.values

    def tightened(self) -> "LatticeFunction":
        return LatticeFunction(self.ctx, self.flavor, self.N, self.M,
                               dict(self.values))

    def plancherel_mass(self) -> GradedScalar:
        """sum |f(x)|^2 vol(x-coset) with vol(O) = 1."""
        acc = GradedScalar.zero(self.ctx)
        for v in self.values.values():
            acc = acc + v * v.conjugate()
        return acc * GradedScalar.q_power(self.ctx, -2 * self.M)

    def __repr__(self):
        return (f"LatticeFunction(flavor={self.flavor:+d}, N={self.N}, "
                f"M={self.M}, {len(self.values)} cells)")


def phi_m_builder(ctx: ScalarContext, m: int) -> LatticeFunction:
    return LatticeFunction.phi_m(ctx, m, flavor=-1)


def parity_project(f: LatticeFunction, parity: str) -> LatticeFunction:
    """Even or odd part, (f(x) +- f(-x))/2."""
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    g = f.negate_argument()
    if parity == "odd":
        g = g.scale_rational(-1)
    return (f + g).scale_rational(Fraction(1, 2))


def fourier_transform(f: LatticeFunction,
                      max_cells: int = DEFAULT_MAX_CELLS) -> LatticeFunction:
    """fhat(x) = sum_y f(y) psi_flavor(2xy) vol(y-coset); parameters swap.

    Exact finite sum over the table; the output lives on p^-M O / p^N O.
    """
    ctx = f.ctx
    f = f.tightened()
    if f.is_zero():
        return LatticeFunction.zero(ctx, f.flavor)
    p = ctx.p
    n = f.N + f.M
    if n > ctx.depth:
        raise DepthExceeded(f"kernel needs depth {n} > {ctx.depth}")
    if p ** n > max_cells:
        raise LatticeOverflow(f"transform span {n} too large")
    span = p ** n
    order = ctx.order
    root_step = order // span if n > 0 else 0
    sign = 1 if f.flavor == 1 else -1
    vol = GradedScalar.q_power(ctx, -2 * f.M)
    out: dict[int, GradedScalar] = {}
    items = list(f.values.items())
    for s_idx in range(span):
        # raw accumulation {grade: {zeta-exponent: coeff}}, one reduction
        raw: dict[int, dict[int, Fraction]] = {}
        for t, v in items:
            e0 = sign * 2 * t * s_idx % span * root_step % order
            for grade, cyc in v.terms.items():
                slot = raw.setdefault(grade, {})
                for j, c in cyc.coeffs.items():
                    jj = (j + e0) % order
                    acc = slot.get(jj)
                    slot[jj] = c if acc is None else acc + c
        terms = {}
        for grade, coeffs in raw.items():
            cyc = Cyclotomic(ctx, coeffs)
            if not cyc.is_zero():
                terms[grade] = cyc
        if terms:
            val = GradedScalar(ctx, terms) * vol
            if not val.is_zero():
                out[s_idx] = val
    return LatticeFunction(ctx, f.flavor, f.M, f.N, out)


def act_w(f: LatticeFunction, max_cells: int = DEFAULT_MAX_CELLS):
    g = gamma_psi(f.ctx, inverse=(f.flavor == -1))
    return fourier_transform(f, max_cells).scale(
        GradedScalar.from_cyclotomic(g))


def act_upper(b: PadicScalar, f: LatticeFunction,
              max_cells: int = DEFAULT_MAX_CELLS) -> LatticeFunction:
    """Multiplication by psi_flavor(b x^2)."""
    ctx = f.ctx
    if b.is_zero:
        return f
    f = f.tightened()
    beta = b.valuation
    M2 = max(f.M, f.N - beta, (-beta + 1) // 2 if beta < 0 else 0)
    g = f.refine(f.N, M2, max_cells)
    d = 2 * g.N - beta
    if d > ctx.depth:
        raise DepthExceeded("n(b) action argument below character depth")
    if d > b.precision:
        raise PrecisionExhausted("n(b) parameter carries too few digits")
    if d <= 0:
        return g
    p = ctx.p
    pd = p ** d
    b_unit = b.unit_mod(d)
    step = ctx.order // pd
    sign = 1 if g.flavor == 1 else -1
    out = {}
    for t, v in g.values.items():
        # x = p^-N t; b x^2 = p^(beta - 2N) * b_unit * t^2
        e = sign * b_unit * t * t % pd * step % ctx.order
        out[t] = v * GradedScalar.from_cyclotomic(
            Cyclotomic(ctx, {e: Fraction(1)}, canonical=False))
    return LatticeFunction(ctx, g.flavor, g.N, g.M, out)


def act_torus(a: PadicScalar, f: LatticeFunction) -> LatticeFunction:
    """|a|^(1/2) mu_psi(a) f(a x)."""
    ctx = f.ctx
    f = f.tightened()
    va = a.valuation
    mu = weil_index_mu(ctx, a, inverse_psi=(f.flavor == -1))
    scalar = GradedScalar.q_power(ctx, -va, mu)
    if f.is_zero():
        return LatticeFunction.zero(ctx, f.flavor)
    n = f.N + f.M
    if n > a.precision:
        raise PrecisionExhausted("t(a) parameter carries too few digits")
    if n == 0:
        out = dict(f.values)
    else:
        # new index t2 satisfies t_old = ua * t2 mod span
        span = ctx.p ** n
        inv = pow(a.unit_mod(n) % span, -1, span)
        out = {t_old * inv % span: v for t_old, v in f.values.items()}
    return LatticeFunction(ctx, f.flavor, f.N + va, f.M - va, out).scale(
        scalar)


def weil_generator_act(gen: str, f: LatticeFunction, *, b=None, a=None,
                       zeta=None, max_cells: int = DEFAULT_MAX_CELLS):
    if gen == "w":
        return act_w(f, max_cells)
    if gen == "n":
        return act_upper(b, f, max_cells)
    if gen == "t":
        return act_torus(a, f)
    if gen == "zeta":
        return f.scale_rational(zeta)
    raise ValueError(f"unknown generator {gen!r}")


def _bruhat_factors(g: Sl2Element):
    """Typed generator factorization: B-elements as n t, the rest as n t w n."""
    cfg = g.config
    if g.c.is_zero:
        return [("n", g.b * g.a), ("t", g.a)]
    return [("n", g.a / g.c), ("t", -g.c.inverse()), ("w", None),
            ("n", g.d / g.c)]


def _factor_matrix(cfg, kind, param) -> Sl2Element:
    if kind == "n":
        return Sl2Element.upper(param)
    if kind == "t":
        return Sl2Element.torus(param)
    return Sl2Element.w(cfg)


def _act_by_factors(gt: MetaElement, factors, f: LatticeFunction,
                    max_cells: int) -> LatticeFunction:
    cfg = gt.g.config
    prod = meta_product([MetaElement.lift(_factor_matrix(cfg, k, prm))
                         for k, prm in factors])
    if not prod.g == gt.g:
        raise ArithmeticError("factorization lost precision")
    sign = gt.zeta * prod.zeta
    out = f
    for kind, param in reversed(factors):
        if kind == "w":
            out = act_w(out, max_cells)
        elif kind == "t":
            out = act_torus(param, out)
        else:
            out = act_upper(param, out, max_cells)
    if sign != 1:
        out = out.scale_rational(sign)
    return out.tightened()


def weil_act(gt: MetaElement, f: LatticeFunction,
             max_cells: int = DEFAULT_MAX_CELLS) -> LatticeFunction:
    """Action of a cover element: factor, act by generators, fix the sign.

    The sign correction is the cocycle product of the factorization, so the
    result is exactly omega(gt) f whatever factorization was chosen.  If the
    standard route overflows the lattice capacity (deeply integral c-entry),
    the element is rewritten through t(-1) w (w g), whose upper-unipotent
    parameters are the reciprocals.
    """
    cfg = gt.g.config
    try:
        return _act_by_factors(gt, _bruhat_factors(gt.g), f, max_cells)
    except LatticeOverflow:
        pass
    minus_one = PadicScalar.from_int(cfg, -1)
    factors = [("t", minus_one), ("w", None)] + \
        _bruhat_factors(Sl2Element.w(cfg) * gt.g)
    return _act_by_factors(gt, factors, f, max_cells)
