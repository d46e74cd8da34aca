"""Exact "complex-like" coefficient ring.

Values produced by the whole calculator live in

    GradedScalar = finite sums  sum_j c_j q^(j/2),  c_j in Q(zeta_N),

together with rational functions in X = q^(-s) over that ring.  Cyclotomic
numbers are stored sparsely as {exponent: Fraction} over a canonical basis:
writing N = prod l^(a_l), the exponents whose CRT coordinate at every prime
factor l has top base-l digit < l-1 form a Q-basis (tensor product of the
power bases of Q(zeta_{l^a})), and the relation

    sum_{k=0}^{l-1} zeta_N^(j + k N/l) = 0

rewrites any bad exponent.  Equality is therefore decidable and cheap for
the near-monomial values that dominate every computation here.
"""

from __future__ import annotations

import cmath
from fractions import Fraction

from .errors import (DepthExceeded, DivisionByZero, NotInvertible,
                     OracleUnstable, PoleAtEvaluationPoint,
                     PrecisionExhausted)
from .padic import PadicConfig, PadicScalar, legendre_int

_ZERO = Fraction(0)


def _factor_small(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _lcm(a: int, b: int) -> int:
    from math import gcd
    return a * b // gcd(a, b)


class ScalarContext:
    """Cyclotomic order bookkeeping for one run.

    N = lcm(8, p-1) * p^depth.  ``depth`` is the additive-character depth: the
    character accepts arguments of valuation >= -depth.  Character values of
    conductor c need phi(p^c) | N, which holds whenever c <= depth + 1.
    """

    def __init__(self, p: int, depth: int = 24):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.p = p
        self.depth = depth
        base = _lcm(8, p - 1)
        self.order = base * p ** depth
        fac = _factor_small(base)
        fac[p] = fac.get(p, 0) + depth
        # CRT data per prime power factor l^a of N
        self.factors = []
        for ell, a in sorted(fac.items()):
            la = ell ** a
            m = self.order // la
            self.factors.append((ell, a, la, pow(m, -1, la), m))

    def __eq__(self, other):
        return isinstance(other, ScalarContext) and self.order == other.order

    def __repr__(self):
        return f"ScalarContext(p={self.p}, depth={self.depth})"


def _canonicalize(ctx: ScalarContext, coeffs: dict[int, Fraction]) -> dict:
    """Rewrite onto the canonical basis and drop zero coefficients."""
    N = ctx.order
    pending = dict(coeffs)
    out: dict[int, Fraction] = {}
    while pending:
        j, c = pending.popitem()
        if c == 0:
            continue
        bad = None
        for ell, a, la, tinv, _m in ctx.factors:
            e = (tinv * j) % la
            if e // (la // ell) == ell - 1:
                bad = (ell, la)
                break
        if bad is None:
            out[j] = out.get(j, _ZERO) + c
            if out[j] == 0:
                del out[j]
            continue
        ell, la = bad
        step = N // ell
        for k in range(1, ell):
            jj = (j - k * step) % N
            pending[jj] = pending.get(jj, _ZERO) - c
    return {j: c for j, c in out.items() if c != 0}


class Cyclotomic:
    """Element of Q(zeta_N), sparse and canonical."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: ScalarContext, coeffs: dict[int, Fraction],
                 canonical: bool = False):
        self.ctx = ctx
        self.coeffs = coeffs if canonical else _canonicalize(ctx, coeffs)

    @classmethod
    def zero(cls, ctx) -> "Cyclotomic":
        return cls(ctx, {}, canonical=True)

    @classmethod
    def from_rational(cls, ctx, r) -> "Cyclotomic":
        r = Fraction(r)
        return cls(ctx, {} if r == 0 else {0: r}, canonical=True)

    @classmethod
    def one(cls, ctx) -> "Cyclotomic":
        return cls.from_rational(ctx, 1)

    @classmethod
    def root_of_unity(cls, ctx, order: int, power: int = 1) -> "Cyclotomic":
        if ctx.order % order != 0:
            raise ValueError(f"zeta_{order} not in Q(zeta_{ctx.order})")
        return cls(ctx, {(ctx.order // order) * power % ctx.order: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return not self.coeffs or set(self.coeffs) == {0}

    def rational_value(self) -> Fraction:
        if not self.coeffs:
            return _ZERO
        if set(self.coeffs) != {0}:
            raise ValueError("not rational")
        return self.coeffs[0]

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            s = out.get(j, _ZERO) + c
            if s == 0:
                out.pop(j, None)
            else:
                out[j] = s
        return Cyclotomic(self.ctx, out, canonical=True)

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.ctx, {j: -c for j, c in self.coeffs.items()},
                          canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "Cyclotomic") -> "Cyclotomic":
        if not self.coeffs or not other.coeffs:
            return Cyclotomic.zero(self.ctx)
        N = self.ctx.order
        out: dict[int, Fraction] = {}
        for j1, c1 in self.coeffs.items():
            for j2, c2 in other.coeffs.items():
                j = (j1 + j2) % N
                s = out.get(j, _ZERO) + c1 * c2
                if s == 0:
                    out.pop(j, None)
                else:
                    out[j] = s
        return Cyclotomic(self.ctx, out)

    def scale(self, r) -> "Cyclotomic":
        r = Fraction(r)
        if r == 0:
            return Cyclotomic.zero(self.ctx)
        return Cyclotomic(self.ctx, {j: c * r for j, c in self.coeffs.items()},
                          canonical=True)

    def conjugate(self) -> "Cyclotomic":
        N = self.ctx.order
        return Cyclotomic(self.ctx,
                          {(-j) % N: c for j, c in self.coeffs.items()})

    def inverse(self) -> "Cyclotomic":
        if not self.coeffs:
            raise DivisionByZero("inverse of 0")
        if len(self.coeffs) != 1:
            # norm trick would work but is never needed here
            raise NotInvertible("only monomial cyclotomics are inverted")
        (j, c), = self.coeffs.items()
        return Cyclotomic(self.ctx, {(-j) % self.ctx.order: 1 / c})

    def power(self, k: int) -> "Cyclotomic":
        if k < 0:
            return self.inverse().power(-k)
        out = Cyclotomic.one(self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.ctx.order == other.ctx.order and self.coeffs == other.coeffs

    def evaluate(self) -> complex:
        N = self.ctx.order
        return sum(float(c) * cmath.exp(2j * cmath.pi * j / N)
                   for j, c in self.coeffs.items()) if self.coeffs else 0j

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*z^{j}" if j else f"{c}"
                          for j, c in sorted(self.coeffs.items()))


class GradedScalar:
    """Finite sum  sum c_j q^(j/2)  with cyclotomic coefficients.

    Keys of the internal map are 2j (so half-integer exponents stay exact).
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: ScalarContext, terms: dict[int, Cyclotomic]):
        self.ctx = ctx
        self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @classmethod
    def zero(cls, ctx) -> "GradedScalar":
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx) -> "GradedScalar":
        return cls(ctx, {0: Cyclotomic.one(ctx)})

    @classmethod
    def from_cyclotomic(cls, c: Cyclotomic) -> "GradedScalar":
        return cls(c.ctx, {0: c})

    @classmethod
    def from_rational(cls, ctx, r) -> "GradedScalar":
        return cls.from_cyclotomic(Cyclotomic.from_rational(ctx, r))

    @classmethod
    def q_power(cls, ctx, twice_exponent: int,
                coeff: Cyclotomic | None = None) -> "GradedScalar":
        """coeff * q^(twice_exponent / 2)."""
        c = Cyclotomic.one(ctx) if coeff is None else coeff
        return cls(ctx, {twice_exponent: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GradedScalar") -> "GradedScalar":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
        return GradedScalar(self.ctx, out)

    def __neg__(self):
        return GradedScalar(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "GradedScalar") -> "GradedScalar":
        out: dict[int, Cyclotomic] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                prod = v1 * v2
                s = out.get(k)
                out[k] = prod if s is None else s + prod
        return GradedScalar(self.ctx, out)

    def scale(self, r) -> "GradedScalar":
        return GradedScalar(self.ctx,
                            {k: v.scale(r) for k, v in self.terms.items()})

    def conjugate(self) -> "GradedScalar":
        """Complex conjugation: fixes q^(1/2), conjugates coefficients."""
        return GradedScalar(self.ctx,
                            {k: v.conjugate() for k, v in self.terms.items()})

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and \
            next(iter(self.terms.values())).is_monomial()

    def inverse(self) -> "GradedScalar":
        if not self.terms:
            raise DivisionByZero("inverse of 0")
        if len(self.terms) != 1:
            raise NotInvertible("only graded monomials are inverted")
        (k, v), = self.terms.items()
        return GradedScalar(self.ctx, {-k: v.inverse()})

    def power(self, n: int) -> "GradedScalar":
        if n < 0:
            return self.inverse().power(-n)
        out = GradedScalar.one(self.ctx)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedScalar):
            return NotImplemented
        return self.ctx.order == other.ctx.order and self.terms == other.terms

    def evaluate(self, q: int) -> complex:
        return sum(v.evaluate() * q ** (k / 2)
                   for k, v in self.terms.items()) if self.terms else 0j

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            c = self.terms[k]
            if k == 0:
                bits.append(f"({c})")
            else:
                e = k // 2 if k % 2 == 0 else f"{k}/2"
                bits.append(f"({c})q^{e}")
        return " + ".join(bits)


def graded_arith(op: str, lhs: GradedScalar, rhs: GradedScalar):
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs * rhs.inverse()
    raise ValueError(f"unknown operation {op!r}")


def cyc_arith(op: str, lhs: Cyclotomic, rhs: Cyclotomic):
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs * rhs.inverse()
    raise ValueError(f"unknown operation {op!r}")


def valuation_abs(ctx: ScalarContext, a: PadicScalar):
    """(v, |a|) with |a| = q^(-v) exactly; zero maps to (None, 0)."""
    if a.is_zero:
        return None, GradedScalar.zero(ctx)
    return a.valuation, GradedScalar.q_power(ctx, -2 * a.valuation)


# --------------------------------------------------------------------------
# additive character
# --------------------------------------------------------------------------

def additive_character(ctx: ScalarContext, x: PadicScalar,
                       inverse: bool = False) -> Cyclotomic:
    """Unramified psi: psi(x) = zeta_{p^d}^t where frac(x) = t / p^d.

    Trivial on the integers; raises below the configured depth.
    """
    if x.is_zero or x.valuation >= 0:
        return Cyclotomic.one(ctx)
    d = -x.valuation
    if d > ctx.depth:
        raise DepthExceeded(f"valuation -{d} below depth {ctx.depth}")
    t = x.unit_mod(d)
    if inverse:
        t = -t
    return Cyclotomic.root_of_unity(ctx, ctx.p ** d, t)


def psi_exponent(ctx: ScalarContext, num: int, d: int,
                 inverse: bool = False) -> int:
    """Global zeta_N exponent of psi(num / p^d) (integer fast path)."""
    if d > ctx.depth:
        raise DepthExceeded(f"depth {d} exceeds {ctx.depth}")
    pd = ctx.p ** d
    t = num % pd
    if inverse:
        t = -t % pd
    return (ctx.order // pd) * t % ctx.order


# --------------------------------------------------------------------------
# multiplicative characters of F^x
# --------------------------------------------------------------------------

def _primitive_root(pc: int, p: int) -> int:
    """Smallest primitive root modulo p^c (odd p)."""
    phi = pc // p * (p - 1) if pc > p else p - 1
    fac = _factor_small(phi)
    for g in range(2, pc):
        if g % p == 0:
            continue
        if all(pow(g, phi // ell, pc) != 1 for ell in fac):
            return g
    raise RuntimeError("no primitive root found")


class CharacterEta:
    """Quasi-character of F^x given by eta(p) and its action on units.

    ``conductor`` c = least integer with eta trivial on 1 + P^c (0 means
    unramified).  For c >= 1 the unit action sends the fixed primitive root
    g mod p^c to zeta_{phi(p^c)}^unit_exponent; minimality of c is enforced.
    """

    MAX_MODULUS = 10 ** 5

    def __init__(self, ctx: ScalarContext, value_at_p: Cyclotomic,
                 conductor: int = 0, unit_exponent: int = 0):
        if value_at_p.is_zero():
            raise ValueError("eta(p) must be nonzero")
        if not value_at_p.is_monomial():
            raise NotInvertible("eta(p) must be a monomial (invertible)")
        self.ctx = ctx
        self.value_at_p = value_at_p
        self.conductor = conductor
        self.unit_exponent = unit_exponent
        p = ctx.p
        if conductor < 0:
            raise ValueError("conductor must be >= 0")
        if conductor == 0:
            self.modulus = 1
            self.phi = 1
            self._dlog = None
        else:
            pc = p ** conductor
            if pc > self.MAX_MODULUS:
                raise ValueError(f"p^c = {pc} exceeds the dlog table bound")
            self.modulus = pc
            self.phi = pc // p * (p - 1)
            g = _primitive_root(pc, p)
            table = {}
            acc = 1
            for e in range(self.phi):
                table[acc] = e
                acc = acc * g % pc
            self._dlog = table
            self.generator = g
            # conductor minimality: nontrivial on 1 + P^(c-1) (c >= 2),
            # nontrivial on units (c = 1)
            if conductor == 1:
                if unit_exponent % (p - 1) == 0:
                    raise ValueError("conductor 1 requires a nontrivial "
                                     "action on units")
            else:
                if unit_exponent % p == 0:
                    raise ValueError(f"conductor {conductor} is not minimal")

    def is_unramified(self) -> bool:
        return self.conductor == 0

    def unit_value(self, u_mod: int) -> Cyclotomic:
        """eta on a unit residue (mod p^conductor)."""
        if self.conductor == 0:
            return Cyclotomic.one(self.ctx)
        e = self._dlog[u_mod % self.modulus]
        return Cyclotomic.root_of_unity(self.ctx, self.phi,
                                        e * self.unit_exponent)

    def eval(self, a: PadicScalar) -> Cyclotomic:
        if a.is_zero:
            raise DivisionByZero("eta(0) is undefined")
        val = self.value_at_p.power(a.valuation)
        if self.conductor == 0:
            return val
        if a.precision < self.conductor:
            raise PrecisionExhausted("precision below the conductor")
        return val * self.unit_value(a.unit_mod(self.conductor))

    def inverse_character(self) -> "CharacterEta":
        return CharacterEta(self.ctx, self.value_at_p.inverse(),
                            self.conductor, -self.unit_exponent)

    def square_is_ramified(self) -> bool:
        """Whether eta^2 is ramified (needed for abelian L-factors)."""
        if self.conductor == 0:
            return False
        return (2 * self.unit_exponent) % self.phi != 0

    def __repr__(self):
        return (f"CharacterEta(eta(p)={self.value_at_p}, "
                f"c={self.conductor}, t={self.unit_exponent})")


def eta_eval(eta: CharacterEta, a: PadicScalar) -> Cyclotomic:
    return eta.eval(a)


# --------------------------------------------------------------------------
# Weil indices via the stabilized Gauss-sum oracle
# --------------------------------------------------------------------------

_MU_CACHE: dict[tuple, Cyclotomic] = {}


def _gauss_shell_sum(ctx: ScalarContext, a_int: int, a_val: int, k: int,
                     inverse: bool) -> Cyclotomic:
    """S_k(a) = q^-k * sum over p^-k O / p^k O of psi(a x^2), exact.

    Brute force over the q^(2k) coset representatives x = p^-k r; the
    normalization keeps magnitudes bounded as k grows.
    """
    p = ctx.p
    counts: dict[int, int] = {}
    pk2 = p ** (2 * k)
    for r in range(pk2):
        # psi(a * p^(a_val - 2k) * r^2)
        d = 2 * k - a_val
        if d <= 0:
            e = 0
        else:
            e = psi_exponent(ctx, a_int * r * r, d, inverse)
        counts[e] = counts.get(e, 0) + 1
    cyc = Cyclotomic(ctx, {e: Fraction(c) for e, c in counts.items()})
    return cyc  # caller applies the q^-k normalization in the graded ring


_SQRT_P_CACHE: dict[int, Cyclotomic] = {}


def sqrt_p(ctx: ScalarContext) -> Cyclotomic:
    """The positive real sqrt(p) as an exact cyclotomic.

    Gauss: sum_r zeta_p^(r^2) equals sqrt(p) for p = 1 mod 4 and
    i*sqrt(p) for p = 3 mod 4, so a zeta_4 correction lands on sqrt(p).
    """
    hit = _SQRT_P_CACHE.get(ctx.order)
    if hit is not None:
        return hit
    p = ctx.p
    g = Cyclotomic.zero(ctx)
    for r in range(p):
        g = g + Cyclotomic.root_of_unity(ctx, p, r * r % p)
    if p % 4 == 3:
        g = g * Cyclotomic.root_of_unity(ctx, 4, -1)
    if not g * g == Cyclotomic.from_rational(ctx, p):
        raise OracleUnstable("Gauss-sum square root sanity check failed")
    _SQRT_P_CACHE[ctx.order] = g
    return g


def _phase(ctx: ScalarContext, s: Cyclotomic) -> Cyclotomic:
    """s / |s| for a cyclotomic with |s|^2 an exact power of p."""
    norm = s * s.conjugate()
    if not norm.is_rational():
        raise OracleUnstable(f"|S|^2 not rational: {norm}")
    r = norm.rational_value()
    if r <= 0:
        raise OracleUnstable("vanishing Gauss sum")
    # r must be p^e for integer e
    num, den = r.numerator, r.denominator
    p = ctx.p
    e = 0
    while num % p == 0:
        num //= p
        e += 1
    while den % p == 0:
        den //= p
        e -= 1
    if num != 1 or den != 1:
        raise OracleUnstable(f"|S|^2 = {r} is not a power of p")
    if e % 2 == 0:
        return s.scale(Fraction(1, p ** (e // 2)))
    # |s| = p^((e-1)/2) * sqrt(p); divide by the exact cyclotomic sqrt(p)
    root = sqrt_p(ctx)
    return s.scale(Fraction(1, p ** ((e + 1) // 2))) * root


def weil_index_mu(ctx: ScalarContext, a: PadicScalar,
                  inverse_psi: bool = False, max_k: int = 6) -> Cyclotomic:
    """mu_psi(a) = gamma(psi) / gamma(psi_a), a fourth root of unity.

    Computed from the normalized Gauss-sum oracle: the phase of
    S_k(a)/S_k(1) once two consecutive levels k agree.  Depends only on the
    square class of a.
    """
    from .padic import square_class_label
    parity, eps = square_class_label(a)
    key = (ctx.order, parity, eps, inverse_psi)
    hit = _MU_CACHE.get(key)
    if hit is not None:
        return hit
    # canonical class representative as a small integer
    rep = 1 if eps == 1 else a.config.nonresidue
    if parity:
        rep *= ctx.p
    rep_val = parity
    rep_int = rep // (ctx.p if parity else 1)
    prev = None
    result = None
    for k in range(1, max_k + 1):
        s = _gauss_shell_sum(ctx, rep_int, rep_val, k, inverse_psi)
        ph = _phase(ctx, s)
        if prev is not None and ph == prev:
            result = ph
            break
        prev = ph
    if result is None:
        raise OracleUnstable(f"Gauss-sum phase did not settle by k={max_k}")
    if not (result * result * result * result == Cyclotomic.one(ctx)):
        raise OracleUnstable("stabilized phase is not a 4th root of unity")
    _MU_CACHE[key] = result
    return result


_GAMMA_CACHE: dict[tuple, Cyclotomic] = {}


def gamma_psi(ctx: ScalarContext, inverse: bool = False,
              max_k: int = 6) -> Cyclotomic:
    """Normalized Weil index of psi^(+-1); equals 1 for unramified psi, odd p.

    Still computed by the oracle (phase of S_k(1)) and asserted.
    """
    key = (ctx.order, inverse)
    hit = _GAMMA_CACHE.get(key)
    if hit is not None:
        return hit
    prev = None
    for k in range(1, max_k + 1):
        s = _gauss_shell_sum(ctx, 1, 0, k, inverse)
        ph = _phase(ctx, s)
        if prev is not None and ph == prev:
            if not ph == Cyclotomic.one(ctx):
                raise OracleUnstable(f"gamma(psi) = {ph} != 1")
            _GAMMA_CACHE[key] = ph
            return ph
        prev = ph
    raise OracleUnstable("gamma(psi) oracle did not stabilize")


# --------------------------------------------------------------------------
# Laurent polynomials and rational functions in X = q^(-s)
# --------------------------------------------------------------------------

class PolyX:
    """Laurent polynomial in X with GradedScalar coefficients (sparse)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: ScalarContext, coeffs: dict[int, GradedScalar]):
        self.ctx = ctx
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, {})

    @classmethod
    def one(cls, ctx):
        return cls(ctx, {0: GradedScalar.one(ctx)})

    @classmethod
    def x_power(cls, ctx, k: int, coeff: GradedScalar | None = None):
        return cls(ctx, {k: GradedScalar.one(ctx) if coeff is None else coeff})

    @classmethod
    def constant(cls, ctx, c: GradedScalar):
        return cls(ctx, {0: c})

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            out[k] = v if s is None else s + v
        return PolyX(self.ctx, out)

    def __neg__(self):
        return PolyX(self.ctx, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out: dict[int, GradedScalar] = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                k = k1 + k2
                prod = v1 * v2
                s = out.get(k)
                out[k] = prod if s is None else s + prod
        return PolyX(self.ctx, out)

    def scale(self, g: GradedScalar):
        return PolyX(self.ctx, {k: v * g for k, v in self.coeffs.items()})

    def min_degree(self):
        return min(self.coeffs) if self.coeffs else 0

    def max_degree(self):
        return max(self.coeffs) if self.coeffs else 0

    def shift(self, k: int):
        return PolyX(self.ctx, {d + k: v for d, v in self.coeffs.items()})

    def coefficient(self, k: int) -> GradedScalar:
        return self.coeffs.get(k, GradedScalar.zero(self.ctx))

    def __eq__(self, other):
        if not isinstance(other, PolyX):
            return NotImplemented
        return self.coeffs == other.coeffs

    def evaluate(self, q: int, s: complex) -> complex:
        x = q ** (-s)
        return sum(v.evaluate(q) * x ** k for k, v in self.coeffs.items()) \
            if self.coeffs else 0j

    def substitute_dual(self) -> "PolyX":
        """X -> q^-1 X^-1 (the map s -> 1 - s)."""
        out: dict[int, GradedScalar] = {}
        for k, v in self.coeffs.items():
            out[-k] = v * GradedScalar.q_power(self.ctx, -2 * k)
        return PolyX(self.ctx, out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"[{self.coeffs[k]}]X^{k}"
                          for k in sorted(self.coeffs))


def _poly_divmod(num: PolyX, den: PolyX):
    """Division with remainder; requires invertible leading coefficient."""
    ctx = num.ctx
    if den.is_zero():
        raise DivisionByZero("polynomial division by zero")
    dlead = den.max_degree()
    dcoef = den.coeffs[dlead]
    inv = dcoef.inverse()  # NotInvertible bubbles up to the caller
    q = PolyX.zero(ctx)
    r = num
    while not r.is_zero() and r.max_degree() >= dlead:
        k = r.max_degree() - dlead
        c = r.coeffs[r.max_degree()] * inv
        t = PolyX(ctx, {k: c})
        q = q + t
        r = r - t * den
    return q, r


def _poly_gcd(a: PolyX, b: PolyX) -> PolyX:
    """Monic Euclidean gcd; falls back to 1 if a leading coefficient is
    not invertible (equality never relies on reduced form)."""
    ctx = a.ctx
    try:
        while not b.is_zero():
            _, r = _poly_divmod(a, b)
            a, b = b, r
        if a.is_zero():
            return PolyX.one(ctx)
        lead = a.coeffs[a.max_degree()]
        return a.scale(lead.inverse())
    except NotInvertible:
        return PolyX.one(ctx)


class RationalFunctionX:
    """num/den with PolyX parts, gcd-reduced when leading terms allow."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: ScalarContext, num: PolyX, den: PolyX,
                 reduce: bool = True):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        # clear Laurent tails so both parts are honest polynomials
        shift = min(num.min_degree() if not num.is_zero() else 0,
                    den.min_degree())
        if shift != 0:
            num = num.shift(-shift)
            den = den.shift(-shift)
        if num.is_zero():
            den = PolyX.one(ctx)
        elif reduce:
            g = _poly_gcd(num, den)
            if g.max_degree() > 0:
                num, _ = _poly_divmod(num, g)
                den, _ = _poly_divmod(den, g)
        # normalize: denominator constant term (or leading coeff) to 1
        key = den.min_degree()
        lead = den.coeffs[key]
        try:
            inv = lead.inverse()
            num = num.scale(inv)
            den = den.scale(inv)
        except NotInvertible:
            pass
        self.ctx = ctx
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, poly: PolyX) -> "RationalFunctionX":
        return cls(poly.ctx, poly, PolyX.one(poly.ctx), reduce=False)

    @classmethod
    def one(cls, ctx) -> "RationalFunctionX":
        return cls.from_poly(PolyX.one(ctx))

    @classmethod
    def zero(cls, ctx) -> "RationalFunctionX":
        return cls.from_poly(PolyX.zero(ctx))

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        return RationalFunctionX(self.ctx,
                                 self.num * other.den + other.num * self.den,
                                 self.den * other.den)

    def __neg__(self):
        return RationalFunctionX(self.ctx, -self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunctionX(self.ctx, self.num * other.num,
                                 self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RationalFunctionX(self.ctx, self.num * other.den,
                                 self.den * other.num)

    def scale(self, g: GradedScalar):
        return RationalFunctionX(self.ctx, self.num.scale(g), self.den,
                                 reduce=False)

    def __eq__(self, other):
        if not isinstance(other, RationalFunctionX):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def evaluate(self, q: int, s: complex) -> complex:
        d = self.den.evaluate(q, s)
        if abs(d) < 1e-30:
            raise PoleAtEvaluationPoint(f"denominator vanishes at s={s}")
        return self.num.evaluate(q, s) / d

    def series_coefficients(self, k_max: int) -> list[GradedScalar]:
        """Taylor coefficients of num/den in X through X^k_max.

        Requires an invertible constant term in the denominator.
        """
        ctx = self.ctx
        if self.den.min_degree() < 0 or self.num.min_degree() < 0:
            raise ValueError("not a power series at X=0")
        d0 = self.den.coefficient(0)
        inv0 = d0.inverse()
        out = []
        for k in range(k_max + 1):
            acc = self.num.coefficient(k)
            for j in range(k):
                acc = acc - out[j] * self.den.coefficient(k - j)
            out.append(acc * inv0)
        return out

    def substitute_dual(self) -> "RationalFunctionX":
        """The involution s -> 1-s (X -> q^-1 X^-1) applied to num and den."""
        return RationalFunctionX(self.ctx, self.num.substitute_dual(),
                                 self.den.substitute_dual())

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def rf_arith(op: str, lhs: RationalFunctionX, rhs: RationalFunctionX):
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


# --------------------------------------------------------------------------
# L-factors
# --------------------------------------------------------------------------

def lfactor_abelian(ctx: ScalarContext, value: Cyclotomic | None,
                    twist: PolyX) -> RationalFunctionX:
    """1 / (1 - value * twist) for an unramified character value; 1 when
    the character is ramified (value None)."""
    if value is None:
        return RationalFunctionX.one(ctx)
    one = PolyX.one(ctx)
    den = one - twist.scale(GradedScalar.from_cyclotomic(value))
    return RationalFunctionX(ctx, one, den, reduce=False)


def lfactor_standard3(ctx: ScalarContext, satake: GradedScalar,
                      twist: PolyX) -> RationalFunctionX:
    """1 / ((1 - c)(1 - a c)(1 - a^-1 c)) with c the twist polynomial."""
    if satake.is_zero():
        raise DivisionByZero("Satake parameter must be nonzero")
    one = PolyX.one(ctx)
    ainv = satake.inverse()
    den = (one - twist) \
        * (one - twist.scale(satake)) \
        * (one - twist.scale(ainv))
    return RationalFunctionX(ctx, one, den, reduce=False)


def lfactor(ctx: ScalarContext, kind: str, *, value=None, satake=None,
            twist: PolyX) -> RationalFunctionX:
    if kind == "abelian":
        return lfactor_abelian(ctx, value, twist)
    if kind == "standard-3dim":
        return lfactor_standard3(ctx, satake, twist)
    raise ValueError(f"unknown L-factor kind {kind!r}")


def evaluate_numeric(value, q: int, s: complex = 0j) -> complex:
    """Float evaluation of any exact value in this module."""
    if isinstance(value, Cyclotomic):
        return value.evaluate()
    if isinstance(value, GradedScalar):
        return value.evaluate(q)
    if isinstance(value, (PolyX, RationalFunctionX)):
        return value.evaluate(q, s)
    raise TypeError(f"cannot evaluate {type(value).__name__}")
