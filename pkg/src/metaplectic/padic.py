"""Exact finite-precision arithmetic over the p-adic rationals, odd p.

A nonzero scalar is stored as p^v * u where u is a unit known modulo
p^precision ("significant digits").  Addition of nearly-cancelling values
loses digits; when every known digit cancels the result is declared exact
zero (equality is always relative to the shared carried precision).

The quadratic machinery lives here too: Legendre symbols, square classes,
Hilbert symbols and square roots of units near 1 (Newton iteration, which
converges for odd residue characteristic).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, NotAUnit, NotInDomain, PrecisionExhausted


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def int_valuation(n: int, p: int) -> int:
    """Largest e with p^e dividing n (n nonzero)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicConfig:
    """Ambient field data: the odd prime p and default digit count."""

    def __init__(self, p: int, precision: int = 24):
        if p < 3 or p % 2 == 0 or not _is_prime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if precision < 1:
            raise ValueError("precision must be >= 1")
        self.p = p
        self.precision = precision
        self._nonresidue = None

    @property
    def nonresidue(self) -> int:
        """Smallest positive integer that is a quadratic non-residue mod p."""
        if self._nonresidue is None:
            for u in range(2, self.p):
                if pow(u, (self.p - 1) // 2, self.p) == self.p - 1:
                    self._nonresidue = u
                    break
        return self._nonresidue

    def __eq__(self, other):
        return (
            isinstance(other, PadicConfig)
            and self.p == other.p
            and self.precision == other.precision
        )

    def __repr__(self):
        return f"PadicConfig(p={self.p}, precision={self.precision})"


class PadicScalar:
    """Immutable p-adic number at finite precision.

    ``precision`` counts significant base-p digits of the unit part; the
    represented value is known modulo p^(valuation + precision).
    """

    __slots__ = ("config", "is_zero", "valuation", "unit", "precision")

    def __init__(self, config: PadicConfig, is_zero: bool, valuation: int,
                 unit: int, precision: int):
        self.config = config
        self.is_zero = is_zero
        if is_zero:
            self.valuation = 0
            self.unit = 0
            self.precision = config.precision
        else:
            if precision < 1:
                raise PrecisionExhausted("no significant digits remain")
            mod = config.p ** precision
            unit %= mod
            if unit % config.p == 0:
                raise ValueError("unit part divisible by p")
            self.valuation = valuation
            self.unit = unit
            self.precision = precision

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, config: PadicConfig) -> "PadicScalar":
        return cls(config, True, 0, 0, config.precision)

    @classmethod
    def from_int(cls, config: PadicConfig, n: int,
                 precision: int | None = None) -> "PadicScalar":
        if n == 0:
            return cls.zero(config)
        prec = config.precision if precision is None else precision
        v = int_valuation(n, config.p)
        return cls(config, False, v, n // config.p ** v, prec)

    @classmethod
    def from_rational(cls, config: PadicConfig, r: Fraction,
                      precision: int | None = None) -> "PadicScalar":
        if r == 0:
            return cls.zero(config)
        prec = config.precision if precision is None else precision
        num, den = r.numerator, r.denominator
        vn = int_valuation(num, config.p)
        vd = int_valuation(den, config.p)
        mod = config.p ** prec
        u = (num // config.p ** vn) * pow(den // config.p ** vd, -1, mod)
        return cls(config, False, vn - vd, u % mod, prec)

    @classmethod
    def unit_scalar(cls, config: PadicConfig, valuation: int, unit: int,
                    precision: int | None = None) -> "PadicScalar":
        """p^valuation * unit with unit coprime to p."""
        prec = config.precision if precision is None else precision
        if unit % config.p == 0:
            raise ValueError("unit must be coprime to p")
        return cls(config, False, valuation, unit, prec)

    # -- queries -----------------------------------------------------------

    def unit_mod(self, k: int) -> int:
        """Unit part modulo p^k; requires precision >= k."""
        if self.is_zero:
            raise DivisionByZero("zero has no unit part")
        if k > self.precision:
            raise PrecisionExhausted(
                f"need unit mod p^{k}, carry only {self.precision} digits")
        return self.unit % self.config.p ** k

    def residue(self) -> int:
        """Unit part mod p (the leading digit)."""
        return self.unit_mod(1)

    def lift(self) -> Fraction:
        """The exact rational p^v * unit represented by the carried digits."""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.config.p) ** self.valuation

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "PadicScalar"):
        if self.config != other.config:
            raise ValueError("operands from different configurations")

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._check(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        p = self.config.p
        # absolute precision: both summands are known mod p^known
        known = min(self.valuation + self.precision,
                    other.valuation + other.precision)
        vmin = min(self.valuation, other.valuation)
        digits = known - vmin
        if digits < 1:
            raise PrecisionExhausted("summands share no known digits")
        mod = p ** digits
        s = (self.unit * pow(p, self.valuation - vmin)
             + other.unit * pow(p, other.valuation - vmin)) % mod
        if s == 0:
            # all known digits cancel: exact zero at carried precision
            return PadicScalar.zero(self.config)
        w = int_valuation(s, p)
        return PadicScalar(self.config, False, vmin + w, s // p ** w,
                           digits - w)

    def __neg__(self) -> "PadicScalar":
        if self.is_zero:
            return self
        mod = self.config.p ** self.precision
        return PadicScalar(self.config, False, self.valuation,
                           (-self.unit) % mod, self.precision)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._check(other)
        if self.is_zero or other.is_zero:
            return PadicScalar.zero(self.config)
        prec = min(self.precision, other.precision)
        mod = self.config.p ** prec
        return PadicScalar(self.config, False,
                           self.valuation + other.valuation,
                           (self.unit * other.unit) % mod, prec)

    def inverse(self) -> "PadicScalar":
        if self.is_zero:
            raise DivisionByZero("cannot invert zero")
        mod = self.config.p ** self.precision
        return PadicScalar(self.config, False, -self.valuation,
                           pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other: "PadicScalar") -> "PadicScalar":
        return self * other.inverse()

    def square(self) -> "PadicScalar":
        return self * self

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicScalar):
            return NotImplemented
        self._check(other)
        if self.is_zero and other.is_zero:
            return True
        if self.is_zero or other.is_zero:
            return False
        if self.valuation != other.valuation:
            return False
        prec = min(self.precision, other.precision)
        mod = self.config.p ** prec
        return self.unit % mod == other.unit % mod

    def __repr__(self):
        if self.is_zero:
            return "0"
        return (f"{self.config.p}^{self.valuation}*{self.unit}"
                f"(:{self.precision})")


# -- spec-style operation entry points ------------------------------------

def field_arith(op: str, lhs: PadicScalar,
                rhs: PadicScalar | None = None) -> PadicScalar:
    """Dispatcher over {add, sub, mul, inv, neg}."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "neg":
        return -lhs
    if op == "inv":
        return lhs.inverse()
    raise ValueError(f"unknown operation {op!r}")


def legendre_symbol(u: PadicScalar) -> int:
    """+1 iff the unit u is a nonzero square in the residue field."""
    if u.is_zero or u.valuation != 0:
        raise NotAUnit("Legendre symbol needs a unit")
    p = u.config.p
    return 1 if pow(u.residue(), (p - 1) // 2, p) == 1 else -1


def legendre_int(n: int, p: int) -> int:
    n %= p
    if n == 0:
        raise NotAUnit("Legendre symbol of 0")
    return 1 if pow(n, (p - 1) // 2, p) == 1 else -1


def sqrt_near_one(u: PadicScalar, m: int) -> PadicScalar:
    """Square root of u in 1 + P^m, for u in 1 + P^m with m >= 1.

    Newton iteration from 1; the defect valuation doubles each step, so
    ceil(log2(precision)) + 1 steps certify the carried digits.
    """
    if m < 1:
        raise NotInDomain("m must be >= 1")
    cfg = u.config
    one = PadicScalar.from_int(cfg, 1, u.precision)
    diff = u - one
    if not diff.is_zero and diff.valuation < m:
        raise NotInDomain(f"u is not in 1 + P^{m}")
    if u.is_zero or u.valuation != 0:
        raise NotInDomain("u must be a unit")
    prec = u.precision
    mod = cfg.p ** prec
    inv2 = pow(2, -1, mod)
    x = 1
    uval = u.unit % mod
    for _ in range(prec.bit_length() + 2):
        if (x * x - uval) % mod == 0:
            break
        x = (x + uval * pow(x, -1, mod)) % mod * inv2 % mod
    else:
        raise PrecisionExhausted("Newton iteration failed to certify")
    root = PadicScalar(cfg, False, 0, x, prec)
    rdiff = root - one
    if not rdiff.is_zero and rdiff.valuation < m:
        raise PrecisionExhausted("root left the coset 1 + P^m")
    return root


def square_class(a: PadicScalar) -> PadicScalar:
    """Canonical representative of a modulo squares: one of 1, u0, p, u0*p."""
    if a.is_zero:
        raise NotInDomain("square class of 0 is undefined")
    cfg = a.config
    rep = 1 if legendre_symbol(unit_part(a)) == 1 else cfg.nonresidue
    if a.valuation % 2 == 1:
        rep *= cfg.p
    return PadicScalar.from_int(cfg, rep)


def square_class_label(a: PadicScalar) -> tuple[int, int]:
    """(valuation mod 2, Legendre of the unit part)."""
    if a.is_zero:
        raise NotInDomain("square class of 0 is undefined")
    return a.valuation % 2, legendre_symbol(unit_part(a))


def unit_part(a: PadicScalar) -> PadicScalar:
    if a.is_zero:
        raise DivisionByZero("zero has no unit part")
    return PadicScalar(a.config, False, 0, a.unit, a.precision)


def hilbert_symbol(a: PadicScalar, b: PadicScalar) -> int:
    """(a, b)_F for odd residue characteristic.

    With a = p^alpha u and b = p^beta w this is the Legendre symbol of
    (-1)^(alpha*beta) u^beta w^alpha, which only needs residues mod p.
    """
    if a.is_zero or b.is_zero:
        raise NotInDomain("Hilbert symbol needs nonzero arguments")
    p = a.config.p
    alpha, beta = a.valuation, b.valuation
    n = (-1) ** (alpha * beta % 2) * a.residue() ** (beta % 2) \
        * b.residue() ** (alpha % 2)
    return legendre_int(n, p)


def modular_sqrts(n: int, mod: int) -> list[int]:
    """All square roots of n modulo mod by exhaustive search (test oracle)."""
    n %= mod
    return [x for x in range(mod) if x * x % mod == n]
