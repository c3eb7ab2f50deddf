import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from bcovring.exact import MPoly, TruncatedSeries, parse_ratfunc
from bcovring.models import elliptic_periods, load_model, model_periods
from bcovring.modular import AlmostHolPoly
from bcovring.ring import C, K, RingElement, S, Si, Sij, all_generators, hS, hSi, mono_lower, mono_weight


@pytest.fixture(scope="session")
def elliptic():
    return load_model("elliptic")


@pytest.fixture(scope="session")
def quintic():
    return load_model("quintic")


@pytest.fixture(scope="session")
def two_cusp():
    return load_model("two_cusp")


@pytest.fixture(scope="session")
def elliptic_pd(elliptic):
    return elliptic_periods(elliptic, 24)


@pytest.fixture(scope="session")
def quintic_pd(quintic):
    return model_periods(quintic, 16)


# ---------------------------------------------------------------- strategies

small_fracs = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def series(draw, min_len=1, max_len=7, val=0, var="x"):
    cs = draw(st.lists(small_fracs, min_size=min_len, max_size=max_len))
    return TruncatedSeries(cs, val, val + len(cs), var)


PLAIN1 = [Sij(1, 1), Si(1), S(), K(1), C(1, 1, 1)]
HAT1 = [Sij(1, 1), hSi(1), hS(), K(1), C(1, 1, 1)]
RF_POOL = ["1/x", "x", "1/(1-x)", "2/(x^2*(3-x))", "x^2 + 1/5"]


def random_element(rng: random.Random, gens=PLAIN1, r=1, terms=4, max_exp=2, rf=False, homogeneous=True):
    """A random element; all monomials share weight and net lower count when homogeneous."""
    monos = []
    for _ in range(terms * 4):
        m = tuple(sorted(((g, rng.randint(1, max_exp)) for g in rng.sample(gens, rng.randint(0, 3))), key=lambda ge: ge[0]))
        monos.append(m)
    first = monos[0]
    sig = (mono_weight(first), mono_lower(first))
    if homogeneous:
        monos = [m for m in monos if (mono_weight(m), mono_lower(m)) == sig]
    terms_d = {}
    for m in monos[:terms]:
        c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        if rf and rng.random() < 0.5:
            c = parse_ratfunc(rng.choice(RF_POOL)) * c
        if c:
            terms_d[m] = c
    free = (1,) * sig[1] if sig[1] > 0 and r == 1 else ()
    upper = (1,) * (-sig[1]) if sig[1] < 0 and r == 1 else ()
    return RingElement(MPoly(terms_d), sig[0], free, upper, r)


def random_formal(rng: random.Random, r=2, terms=3):
    gens = [g for g in all_generators(r) if g.kind not in ("hS", "hSi")]
    poly = MPoly()
    for _ in range(terms):
        m = MPoly.constant(Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
        for g in rng.sample(gens, rng.randint(1, 3)):
            m = m * MPoly.symbol(g) ** rng.randint(1, 2)
        poly = poly + m
    return RingElement(poly, 0, (), (), r)


def _monos(weight):
    out = []
    for a in range(weight // 2 + 1):
        for b in range(weight // 4 + 1):
            for c in range(weight // 6 + 1):
                for y in range(weight // 2 + 1):
                    if 2 * a + 4 * b + 6 * c + 2 * y == weight:
                        out.append((a, b, c, y))
    return out


def random_almost(rng: random.Random, max_weight=12) -> AlmostHolPoly:
    w = rng.choice(range(0, max_weight + 1, 2))
    names = ("E2", "E4", "E6", "Y")
    p = AlmostHolPoly.const(0)
    for m in rng.sample(_monos(w), min(3, len(_monos(w)))):
        t = AlmostHolPoly.const(Fraction(rng.randint(-7, 7), rng.randint(1, 4)))
        for name, e in zip(names, m):
            t = t * AlmostHolPoly.gen(name) ** e
        p = p + t
    return p
