"""Lattice model of the Weil representation."""

import random
from fractions import Fraction

import pytest

from metaplectic.padic import PadicConfig, PadicScalar
from metaplectic.scalars import (Cyclotomic, GradedScalar, ScalarContext,
                                 additive_character, weil_index_mu)
from metaplectic.sl2 import MetaElement, Sl2Element
from metaplectic.weil import (LatticeFunction, act_torus, act_upper, act_w,
                              fourier_transform, parity_project,
                              phi_m_builder, weil_act)

CTX = {p: ScalarContext(p, depth=14) for p in (3, 5, 7)}
CFG = {p: PadicConfig(p) for p in (3, 5, 7)}


def rand_lattice(ctx, rng, N=0, M=1, flavor=-1):
    p = ctx.p
    vals = {}
    for t in range(p ** (N + M)):
        if rng.random() < 0.7:
            c = Cyclotomic.root_of_unity(ctx, 4 * p, rng.randrange(4 * p))
            vals[t] = GradedScalar.q_power(ctx, rng.randint(-2, 2), c.scale(
                Fraction(rng.randint(1, 3), rng.randint(1, 2))))
    if not vals:
        vals[0] = GradedScalar.one(ctx)
    return LatticeFunction(ctx, flavor, N, M, vals)


def rand_bounded_sl2(cfg, rng, bound=2):
    """Random matrix with all entry valuations in [-bound, bound]."""
    while True:
        def scal(zero_ok=True):
            if zero_ok and rng.random() < 0.2:
                return PadicScalar.zero(cfg)
            u = rng.randrange(1, cfg.p ** 4)
            while u % cfg.p == 0:
                u = rng.randrange(1, cfg.p ** 4)
            return PadicScalar.unit_scalar(cfg, rng.randint(-bound, bound), u)
        g = Sl2Element.upper(scal()) * Sl2Element.torus(scal(False)) * \
            Sl2Element.lower(scal())
        if rng.random() < 0.5:
            g = g * Sl2Element.w(cfg)
        if all(e.is_zero or abs(e.valuation) <= bound
               for e in (g.a, g.b, g.c, g.d)):
            return g


def test_phi_m_values_and_mass():
    ctx, cfg = CTX[5], CFG[5]
    phi = phi_m_builder(ctx, 1)
    one = PadicScalar.from_int(cfg, 1)
    assert phi.evaluate(one) == GradedScalar.one(ctx)
    assert phi.evaluate(PadicScalar.zero(cfg)).is_zero()
    assert phi.evaluate(PadicScalar.from_int(cfg, 6)) == GradedScalar.one(ctx)
    assert phi.evaluate(PadicScalar.from_int(cfg, 2)).is_zero()
    # total mass = vol(1 + P^m) = q^-m
    for m in (1, 2, 3):
        phm = phi_m_builder(ctx, m)
        mass = GradedScalar.zero(ctx)
        for v in phm.values.values():
            mass = mass + v
        assert mass * GradedScalar.q_power(ctx, -2 * phm.M) == \
            GradedScalar.q_power(ctx, -2 * m)


def test_char_integers_self_dual():
    for p in (3, 5, 7):
        ctx = CTX[p]
        f = LatticeFunction.char_integers(ctx)
        assert fourier_transform(f) == f


def test_double_transform_is_argument_flip():
    for p in (3, 5):
        ctx = CTX[p]
        rng = random.Random(60 + p)
        for _ in range(6):
            f = rand_lattice(ctx, rng, N=rng.randint(0, 1),
                             M=rng.randint(0, 1))
            ff = fourier_transform(fourier_transform(f))
            assert ff == f.negate_argument()


def test_transform_of_phi_m_matches_closed_form():
    # with the psi^-1 kernel: phi_m-hat(x) = psi^-1(2x) q^-m Char(P^-m)(x)
    for p, m in ((3, 1), (3, 2), (5, 1), (5, 2)):
        ctx, cfg = CTX[p], CFG[p]
        ft = fourier_transform(phi_m_builder(ctx, m))
        span = p ** m
        qm = GradedScalar.q_power(ctx, -2 * m)
        assert ft.N == m and ft.M == 0
        for t in range(span):
            x = PadicScalar.from_rational(
                cfg, Fraction(t, p ** m)) if t else PadicScalar.zero(cfg)
            expect = qm * GradedScalar.from_cyclotomic(
                additive_character(ctx, x + x, inverse=True))
            got = ft.values.get(t, GradedScalar.zero(ctx))
            assert got == expect


def test_genuine_central_sign():
    ctx, cfg = CTX[5], CFG[5]
    f = phi_m_builder(ctx, 2)
    e = Sl2Element.identity(cfg)
    out = weil_act(MetaElement(e, -1), f)
    assert out == f.scale_rational(-1)


def test_lemma_n_action_on_phi_m():
    # n(b) with b in P^-m scales phi^m by psi^-1(b)
    for p in (3, 5):
        ctx, cfg = CTX[p], CFG[p]
        for m in (1, 2, 3):
            phi = phi_m_builder(ctx, m)
            for t in range(1, p ** m + 1):
                b = PadicScalar.from_rational(cfg, Fraction(t, p ** m))
                out = act_upper(b, phi)
                expect = phi.scale(GradedScalar.from_cyclotomic(
                    additive_character(ctx, b, inverse=True)))
                assert out == expect


def test_lemma_nbar_action_on_phi_m():
    # nbar(x) with x in P^3m fixes phi^m
    for p in (3, 5):
        ctx, cfg = CTX[p], CFG[p]
        for m in (1, 2):
            phi = phi_m_builder(ctx, m)
            for j in range(p):
                x = PadicScalar.from_int(cfg, p ** (3 * m) * (j * p + 1))
                gt = MetaElement.lift(Sl2Element.lower(x))
                assert weil_act(gt, phi) == phi


def test_torus_generator_formula():
    ctx, cfg = CTX[5], CFG[5]
    f = LatticeFunction.char_integers(ctx)
    a = PadicScalar.from_int(cfg, 5)
    out = act_torus(a, f)
    mu = weil_index_mu(ctx, a, inverse_psi=True)
    # f(5x) = Char(p^-1 O); scalar q^-1/2 mu(5)
    expect = LatticeFunction.char_ball(ctx, -1).scale(
        GradedScalar.q_power(ctx, -1, mu))
    assert out == expect


def test_parity_projection():
    ctx, cfg = CTX[5], CFG[5]
    f = LatticeFunction.char_integers(ctx)
    assert parity_project(f, "even") == f
    assert parity_project(f, "odd").is_zero()
    phi = phi_m_builder(ctx, 1)
    odd = parity_project(phi, "odd")
    assert odd.evaluate(PadicScalar.from_int(cfg, 1)) == \
        GradedScalar.from_rational(ctx, Fraction(1, 2))
    assert parity_project(phi, "even") + odd == phi


@pytest.mark.parametrize("p", [3, 5, 7])
def test_representation_property(p):
    ctx, cfg = CTX[p], CFG[p]
    rng = random.Random(80 + p)
    checked = 0
    for _ in range(40):
        f = rand_lattice(ctx, rng, N=0, M=1)
        g1 = rand_bounded_sl2(cfg, rng)
        g2 = rand_bounded_sl2(cfg, rng)
        m1 = MetaElement(g1, rng.choice((1, -1)))
        m2 = MetaElement(g2, rng.choice((1, -1)))
        lhs = weil_act(m1, weil_act(m2, f))
        rhs = weil_act(m1 * m2, f)
        assert lhs == rhs
        checked += 1
    assert checked == 40


@pytest.mark.parametrize("p", [3, 5])
def test_plancherel_preserved(p):
    ctx, cfg = CTX[p], CFG[p]
    rng = random.Random(90 + p)
    for _ in range(10):
        f = rand_lattice(ctx, rng, N=0, M=1)
        mass = f.plancherel_mass()
        for gt in (MetaElement.lift(Sl2Element.w(cfg)),
                   MetaElement.lift(Sl2Element.upper(
                       PadicScalar.from_rational(cfg, Fraction(1, p)))),
                   MetaElement.lift(Sl2Element.torus(
                       PadicScalar.from_int(cfg, p)))):
            assert weil_act(gt, f).plancherel_mass() == mass


@pytest.mark.parametrize("p", [3, 5])
def test_parity_commutes_with_action(p):
    ctx, cfg = CTX[p], CFG[p]
    rng = random.Random(95 + p)
    for _ in range(10):
        f = rand_lattice(ctx, rng, N=1, M=1)
        gt = MetaElement(rand_bounded_sl2(cfg, rng, bound=1),
                         rng.choice((1, -1)))
        for parity in ("even", "odd"):
            assert weil_act(gt, parity_project(f, parity)) == \
                parity_project(weil_act(gt, f), parity)
