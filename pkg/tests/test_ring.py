import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcovring.exact import MPoly, RationalFunction, parse_ratfunc
from bcovring.ring import (
    C,
    K,
    LiftData,
    RingElement,
    RingError,
    S,
    Si,
    Sij,
    check_weight,
    covariant_derive,
    covariant_derive_lifted,
    hat_transform,
    hS,
    hSi,
    k_expand,
    lifted_table,
    reduced_table,
    sym,
    unhat_transform,
)

from conftest import HAT1, PLAIN1, random_element, random_formal

Sxx, Sx, S0, Kx, Cxxx = Sij(1, 1), Si(1), S(), K(1), C(1, 1, 1)
RED = reduced_table()
RED_HAT = reduced_table(basis="hat")


def el(text, free=(), weight=None, upper=()):
    e = RingElement.parse(text, 1, weight, free)
    return RingElement(e.poly, e.weight, free, upper, 1)


def quintic_lift(zero_e=False):
    P = parse_ratfunc
    Cq = P("5/(x^3*(1-3125*x))")
    if zero_e:
        z = RationalFunction.from_value(0)
        return LiftData(C=Cq, f=P("-8/(5*x)"), h=z, Exx=z, Ex=z, E=z, kappa=z)
    return LiftData(C=Cq, f=P("-8/(5*x)"), h=P("2/(25*x^2)"), Exx=P("x/25"), Ex=P("-1/125"), E=P("2/(3125*x)"), kappa=P("2/(25*x^2)") / Cq)


def test_reduced_rules_one_modulus():
    assert covariant_derive(el("S"), 1, RED) == el("-Cxxx*Sx^2/2", (1,))
    assert covariant_derive(el("Sxx"), 1, RED).poly == el("2*Sx - Cxxx*Sxx^2").poly
    assert covariant_derive(el("Sx"), 1, RED).poly == el("2*S - Cxxx*Sx*Sxx").poly
    assert covariant_derive(el("Kx", (1,)), 1, RED) == el("-Kx^2 + Cxxx*Sxx*Kx - Cxxx*Sx", (1, 1))


def test_yukawa_rule_pairing_count():
    # three pairings of four lower indices, four K terms
    d = covariant_derive(el("Cxxx", (1, 1, 1)), 1, RED)
    assert d == el("3*Cxxx^2*Sxx - 4*Kx*Cxxx", (1, 1, 1, 1))


def test_derivative_of_one():
    assert covariant_derive(RingElement(MPoly.constant(1), 0), 1, RED).is_zero()


def test_hatted_rules():
    assert RED_HAT.rule(hSi(1), 1) == sym(hS(), Fraction(2))
    assert RED_HAT.rule(hS(), 1) == el("-2*hS*Kx + hSx^2*Cxxx/2").poly
    assert RED_HAT.rule(Sxx, 1) == el("2*hSx + 2*Sxx*Kx - Sxx^2*Cxxx").poly
    assert RED_HAT.rule(Kx, 1) == el("-hSx*Cxxx - Kx^2").poly


def test_lifted_quintic_examples():
    lift = quintic_lift()
    x = RationalFunction.variable()
    d = covariant_derive_lifted(el("Sxx", upper=(1, 1)), 1, lift)
    assert d.poly == el("2*Sx").poly - sym(Sxx) ** 2 * lift.C + MPoly.constant(x / 25)
    dk = covariant_derive_lifted(el("Kx", (1,)), 1, lift)
    expect = -(sym(Kx) ** 2) + sym(Sxx) * sym(Kx) * lift.C - sym(Sx) * lift.C + MPoly.constant(parse_ratfunc("2/(25*x^2)"))
    assert dk.poly == expect


def test_lifted_degenerates_to_reduced():
    rng = random.Random(7)
    lift = quintic_lift(zero_e=True)
    tl = lifted_table(lift)
    gens = [Sxx, Sx, S0]
    for _ in range(20):
        e = random_element(rng, gens)
        red = covariant_derive(e, 1, RED).poly.substitute({Cxxx: MPoly.constant(lift.C)})
        assert covariant_derive(e, 1, tl).poly == red


def test_reduced_rejects_typed_rational_coefficients():
    e = RingElement(MPoly({(): parse_ratfunc("1/x"), ((Sxx, 1),): Fraction(1)}), -2, (), (1, 1))
    with pytest.raises(RingError):
        covariant_derive(e, 1, RED)


def test_hat_examples():
    assert unhat_transform(el("hS")) == el("S - Sx*Kx + Sxx*Kx^2/2", weight=-2)
    assert unhat_transform(el("Sxx")) == el("Sxx")
    assert hat_transform(el("Sxx")) == el("Sxx")
    e = el("Sx*S*Cxxx + Sxx^2*Kx*S*Cxxx - 3*S*Sxx*Cxxx", weight=-2)
    assert unhat_transform(hat_transform(e)) == e


def test_k_expand_examples():
    e = RingElement(MPoly({(): Fraction(2), ((Kx, 1),): Fraction(3), ((Kx, 2),): Fraction(5)}), 0)
    parts = k_expand(e)
    assert {k: v.poly for k, v in parts.items()} == {(): MPoly.constant(2), ((Kx, 1),): MPoly.constant(3), ((Kx, 2),): MPoly.constant(5)}
    parts = k_expand(el("Sxx*Cxxx"))
    assert list(parts) == [()]
    with pytest.raises(RingError):
        k_expand(RingElement(sym(Kx) ** 3, 0), max_degree=2)


def test_check_weight_examples():
    assert check_weight(el("Sxx*Cxxx", (1,)))
    bad = RingElement(sym(S0) * sym(S0), -2)
    rep = check_weight(bad)
    assert not rep and rep.offending == "S^2"


def test_generator_ordering_is_canonical():
    a = el("Kx*Sxx + Sxx*Kx")
    b = el("2*Sxx*Kx")
    assert a == b and a.to_dict() == b.to_dict()
    assert C(2, 1, 1) == C(1, 1, 2)


# ---------------------------------------------------------------- properties


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_leibniz_reduced(rng):
    a, b = random_element(rng), random_element(rng)
    lhs = covariant_derive(a * b, 1, RED)
    rhs = covariant_derive(a, 1, RED) * b + a * covariant_derive(b, 1, RED)
    assert lhs.poly == rhs.poly


LIFTED = lifted_table(quintic_lift())


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_leibniz_lifted(rng):
    gens = [Sxx, Sx, S0, Kx]
    a = random_element(rng, gens, rf=True, homogeneous=False, terms=3)
    b = random_element(rng, gens, rf=True, homogeneous=False, terms=3)
    lhs = covariant_derive(a * b, 1, LIFTED)
    rhs = covariant_derive(a, 1, LIFTED) * b + a * covariant_derive(b, 1, LIFTED)
    assert lhs.poly == rhs.poly


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_weight_preserved(rng):
    e = random_element(rng)
    assert check_weight(e)
    d = covariant_derive(e, 1, RED)
    assert d.weight == e.weight
    assert check_weight(d)


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_r2_derivations_commute(rng):
    t = reduced_table(r=2)
    e = random_formal(rng)
    a = covariant_derive(covariant_derive(e, 1, t), 2, t)
    b = covariant_derive(covariant_derive(e, 2, t), 1, t)
    assert a.poly == b.poly


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_hat_unhat_inverse(rng):
    e = random_element(rng, PLAIN1, max_exp=3)
    assert unhat_transform(hat_transform(e)) == e
    h = random_element(rng, HAT1, max_exp=3)
    assert hat_transform(unhat_transform(h)) == h


@settings(max_examples=50, deadline=None)
@given(st.randoms(use_true_random=False))
def test_hatted_k_free_derivative_is_linear_in_k(rng):
    e = random_element(rng, [Sxx, hSi(1), hS(), Cxxx])
    d = covariant_derive(e, 1, RED_HAT)
    assert all(len(k) == 0 or k[0][1] <= 1 for k in k_expand(d, max_degree=1))
    # same derivative computed through the plain rules
    assert hat_transform(covariant_derive(unhat_transform(e), 1, RED)).poly == d.poly
