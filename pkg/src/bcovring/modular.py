"""Quasi-modular and almost-holomorphic modular forms for SL(2, Z).

Symbols are ``E2, E4, E6`` and ``Y = (1/2 pi i) / (tbar - t)``.  With
``D = q d/dq`` one has ``D Y = Y**2``, and the almost-holomorphic generator
is ``E2* = E2 - 12 Y``.

Two derivations act on almost-holomorphic polynomials:

* :func:`q_derive` is plain ``D`` (Ramanujan on E's, ``Y -> Y**2``);
* :func:`almost_hol_derive` is the weight-raising ``D - k Y`` on weight ``k``
  pieces, which maps almost-holomorphic modular forms to themselves and
  sends ``E2* -> (E2*^2 - E4)/12``.

Both commute with the constant-term map :func:`kz_constant_term`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import MPoly, TruncatedSeries, YSeries

__all__ = [
    "QExpansion",
    "QuasiModularPoly",
    "AlmostHolPoly",
    "eisenstein",
    "eta24",
    "j_normalized",
    "ramanujan_derive",
    "q_derive",
    "almost_hol_derive",
    "kz_constant_term",
    "d_dE2",
    "evaluate",
    "evaluate_almost",
    "ZEntry",
    "modular_anomaly_rhs",
    "MissingEntryError",
]

WEIGHTS = {"E2": 2, "E4": 4, "E6": 6, "Y": 2}
_EIS = {2: -24, 4: 240, 6: -504}


@dataclass(frozen=True)
class QExpansion:
    series: TruncatedSeries
    weight: int
    name: str


def _sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d**k
            e = n // d
            if e != d:
                s += e**k
        d += 1
    return s


@lru_cache(maxsize=32)
def _eis_series(k: int, order: int) -> TruncatedSeries:
    c = _EIS[k]
    return TruncatedSeries([1] + [c * _sigma(n, k - 1) for n in range(1, order + 1)], 0, order + 1, "q")


def eisenstein(k: int, order: int) -> QExpansion:
    """``E_k`` through ``q**order`` (constant term 1)."""
    if k not in _EIS:
        raise ValueError(f"unsupported Eisenstein weight {k}")
    if order < 0:
        raise ValueError("order must be non-negative")
    return QExpansion(_eis_series(k, order), k, f"E{k}")


@lru_cache(maxsize=32)
def _eta24_series(order: int) -> TruncatedSeries:
    # q * prod (1 - q^n)^24 through q^order
    n_max = order - 1
    prod = [0] * (n_max + 1)
    prod[0] = 1
    for n in range(1, n_max + 1):
        for _ in range(24):
            for i in range(n_max, n - 1, -1):
                prod[i] -= prod[i - n]
    return TruncatedSeries(prod, 1, order + 1, "q")


def eta24(order: int) -> QExpansion:
    if order < 1:
        raise ValueError("eta24 needs order >= 1")
    return QExpansion(_eta24_series(order), 12, "eta24")


def j_normalized(order: int) -> QExpansion:
    """``E4**3 / eta**24 = 1/q + 744 + ...`` through ``q**order``."""
    e4 = _eis_series(4, order + 2)
    j = e4**3 / _eta24_series(order + 2)
    return QExpansion(j.truncate(order + 1), 0, "j")


class QuasiModularPoly:
    """Element of ``Q[E2, E4, E6]``."""

    SYMBOLS = ("E2", "E4", "E6")
    __slots__ = ("poly",)

    def __init__(self, poly: MPoly | None = None):
        poly = poly if poly is not None else MPoly()
        bad = poly.symbols() - set(self.SYMBOLS)
        if bad:
            raise ValueError(f"unexpected symbols {sorted(bad)}")
        self.poly = poly

    @classmethod
    def gen(cls, name: str):
        return cls(MPoly.symbol(name))

    @classmethod
    def const(cls, c):
        return cls(MPoly.constant(Fraction(c)))

    @classmethod
    def parse(cls, text: str):
        from .exact.poly import _ast_eval  # shared expression evaluator

        names = {s: cls.gen(s) for s in cls.SYMBOLS}
        return _ast_eval(text, names, lambda v: cls.const(v))

    def _wrap(self, p: MPoly):
        return type(self)(p)

    def _c(self, other):
        if isinstance(other, type(self)):
            return other.poly
        if isinstance(other, QuasiModularPoly) and not isinstance(self, AlmostHolPoly):
            raise TypeError("cannot mix quasi-modular and almost-holomorphic")
        if isinstance(other, (int, Fraction)):
            return MPoly.constant(Fraction(other))
        if isinstance(other, QuasiModularPoly):
            return other.poly
        raise TypeError(f"cannot combine with {type(other).__name__}")

    def __add__(self, other):
        return self._wrap(self.poly + self._c(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.poly - self._c(other))

    def __rsub__(self, other):
        return self._wrap(self._c(other) - self.poly)

    def __neg__(self):
        return self._wrap(-self.poly)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._wrap(self.poly * Fraction(other))
        return self._wrap(self.poly * self._c(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._wrap(self.poly * (1 / Fraction(other)))
        raise TypeError("only division by scalars")

    def __pow__(self, n: int):
        return self._wrap(self.poly**n)

    def __eq__(self, other):
        try:
            return (self.poly - self._c(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def monomial_weights(self) -> set[int]:
        return {sum(WEIGHTS[s] * e for s, e in m) for m in self.poly.terms}

    @property
    def weight(self) -> int | None:
        """Common weight of all monomials; None when mixed (0 for zero)."""
        ws = self.monomial_weights()
        if not ws:
            return 0
        return ws.pop() if len(ws) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.weight is not None

    def __repr__(self):
        return f"{type(self).__name__}({self.poly!r})"


class AlmostHolPoly(QuasiModularPoly):
    """Element of ``Q[E2, E4, E6, Y]``; ``E2* = E2 - 12 Y``."""

    SYMBOLS = ("E2", "E4", "E6", "Y")

    @classmethod
    def E2star(cls):
        return cls.gen("E2") - cls.gen("Y") * 12

    @classmethod
    def lift(cls, p: QuasiModularPoly) -> "AlmostHolPoly":
        return cls(p.poly)

    @classmethod
    def parse(cls, text: str):
        from .exact.poly import _ast_eval

        names = {s: cls.gen(s) for s in cls.SYMBOLS}
        names["E2star"] = cls.E2star()
        return _ast_eval(text, names, lambda v: cls.const(v))

    def in_e2star(self) -> MPoly:
        """Rewrite over ``E2star, E4, E6, Y`` (``E2 = E2star + 12 Y``)."""
        return self.poly.substitute({"E2": MPoly.symbol("E2star") + MPoly.symbol("Y", Fraction(12))})

    def is_modular_form(self) -> bool:
        """True iff free of Y after rewriting in ``E2star`` (almost-holomorphic modular)."""
        return self.in_e2star().degree("Y") == 0


_RAMANUJAN = {
    "E2": (MPoly.symbol("E2") ** 2 - MPoly.symbol("E4")) * Fraction(1, 12),
    "E4": (MPoly.symbol("E2") * MPoly.symbol("E4") - MPoly.symbol("E6")) * Fraction(1, 3),
    "E6": (MPoly.symbol("E2") * MPoly.symbol("E6") - MPoly.symbol("E4") ** 2) * Fraction(1, 2),
    "Y": MPoly.symbol("Y") ** 2,
}


def _derive(p: MPoly, rules: dict) -> MPoly:
    out = MPoly()
    for s in p.symbols():
        out = out + p.partial(s) * rules[s]
    return out


def ramanujan_derive(p: QuasiModularPoly) -> QuasiModularPoly:
    """``q d/dq`` on ``Q[E2, E4, E6]``."""
    if isinstance(p, AlmostHolPoly):
        raise TypeError("use q_derive or almost_hol_derive for almost-holomorphic input")
    return QuasiModularPoly(_derive(p.poly, _RAMANUJAN))


def q_derive(p: AlmostHolPoly) -> AlmostHolPoly:
    """Plain ``q d/dq`` with ``D Y = Y**2``."""
    return AlmostHolPoly(_derive(p.poly, _RAMANUJAN))


def almost_hol_derive(p: AlmostHolPoly) -> AlmostHolPoly:
    """``D - k Y`` on each weight-``k`` piece."""
    out = _derive(p.poly, _RAMANUJAN)
    y = MPoly.symbol("Y")
    for m, c in p.poly.terms.items():
        k = sum(WEIGHTS[s] * e for s, e in m)
        if k:
            out = out - MPoly.monomial(m, c * k) * y
    return AlmostHolPoly(out)


def kz_constant_term(p: AlmostHolPoly) -> QuasiModularPoly:
    """Set ``Y = 0``."""
    return QuasiModularPoly(p.poly.coefficient_of("Y", 0))


def d_dE2(p: QuasiModularPoly) -> QuasiModularPoly:
    return type(p)(p.poly.partial("E2"))


def evaluate(p: QuasiModularPoly, order: int) -> TruncatedSeries:
    """q-expansion through ``q**order`` (Y-free input)."""
    if p.poly.degree("Y") if "Y" in p.poly.symbols() else 0:
        raise ValueError("Y present; use evaluate_almost")
    gens = {f"E{k}": _eis_series(k, order) for k in (2, 4, 6)}
    return p.poly.evaluate(gens, TruncatedSeries.constant(1, order + 1, "q"))


def evaluate_almost(p: AlmostHolPoly, order: int) -> YSeries:
    """As a polynomial in Y over q-series."""
    prec = order + 1
    gens = {f"E{k}": YSeries.from_series(_eis_series(k, order)) for k in (2, 4, 6)}
    gens["Y"] = YSeries.Y(prec, "q")
    one = YSeries.from_series(TruncatedSeries.constant(1, prec, "q"))
    return p.poly.evaluate(gens, one)


class MissingEntryError(KeyError):
    pass


@dataclass(frozen=True)
class ZEntry:
    """``Z = P * q**(n/2) / eta**(12 n)`` with the prefactor kept symbolic."""

    n: int
    P: QuasiModularPoly

    def __mul__(self, other: "ZEntry") -> "ZEntry":
        return ZEntry(self.n + other.n, self.P * other.P)

    def scale(self, c) -> "ZEntry":
        return ZEntry(self.n, self.P * Fraction(c))

    def d_dE2(self) -> "ZEntry":
        # the prefactor is E2-free
        return ZEntry(self.n, d_dE2(self.P))


def modular_anomaly_rhs(table: dict, g: int, n: int) -> ZEntry:
    """Right-hand side of the E2-recursion for ``Z_{g;n}``.

    ``(1/24) sum_{g'+g''=g} sum_{s=1}^{n-1} s(n-s) Z_{g';s} Z_{g'';n-s}
    + n(n+1)/24 Z_{g-1;n}``.
    """
    if g < 0 or n < 1:
        raise ValueError("need g >= 0 and n >= 1")

    def get(key):
        try:
            z = table[key]
        except KeyError:
            raise MissingEntryError(f"missing Z_{{{key[0]};{key[1]}}}") from None
        if not isinstance(z, ZEntry):
            z = ZEntry(key[1], z)
        if z.n != key[1]:
            raise ValueError(f"entry {key} carries prefactor index {z.n}")
        return z

    acc = QuasiModularPoly()
    for g1 in range(g + 1):
        g2 = g - g1
        for s in range(1, n):
            acc = acc + (get((g1, s)) * get((g2, n - s))).P * Fraction(s * (n - s), 24)
    if g >= 1:
        acc = acc + get((g - 1, n)).P * Fraction(n * (n + 1), 24)
    return ZEntry(n, acc)
