"""Sparse multivariate polynomials over an arbitrary exact coefficient ring.

A monomial is a tuple of ``(symbol, exponent)`` pairs sorted by symbol;
symbols only need to be hashable and totally ordered.  Coefficients are
:class:`~fractions.Fraction` or anything with the usual ring operators
(``RationalFunction`` in particular).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

__all__ = ["MPoly", "mono_mul", "mono_degree", "mono_from_pairs", "is_zero_coeff"]


def is_zero_coeff(c) -> bool:
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z()
    return c == 0


def mono_from_pairs(pairs: Iterable) -> tuple:
    acc: dict = {}
    for s, e in pairs:
        acc[s] = acc.get(s, 0) + e
    return tuple(sorted((s, e) for s, e in acc.items() if e))


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        sa, ea = a[i]
        sb, eb = b[j]
        if sa == sb:
            out.append((sa, ea + eb))
            i += 1
            j += 1
        elif sa < sb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_degree(m: tuple, sym) -> int:
    for s, e in m:
        if s == sym:
            return e
    return 0


class MPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if not is_zero_coeff(c):
                clean[m] = c
        self.terms: dict[tuple, object] = clean

    @classmethod
    def constant(cls, c) -> "MPoly":
        if isinstance(c, int):
            c = Fraction(c)
        return cls({(): c})

    @classmethod
    def symbol(cls, s, c=Fraction(1)) -> "MPoly":
        return cls({((s, 1),): c})

    @classmethod
    def monomial(cls, m: tuple, c=Fraction(1)) -> "MPoly":
        return cls({m: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m: tuple):
        return self.terms.get(m, 0)

    def symbols(self) -> set:
        return {s for m in self.terms for s, _ in m}

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            return other
        return MPoly.constant(other)

    def __add__(self, other):
        o = self._coerce(other)
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        out = dict(big)
        for m, c in small.items():
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
        return MPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if is_zero_coeff(other):
                return MPoly()
            return MPoly({m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = mono_mul(ma, mb)
                v = ca * cb
                if m in out:
                    out[m] = out[m] + v
                else:
                    out[m] = v
        return MPoly(out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            if other.symbols() or other.is_zero():
                return NotImplemented
            other = other.terms[()]
        return self.map_coefficients(lambda c: c / other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            try:
                other = MPoly.constant(other)
            except TypeError:
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def map_coefficients(self, f: Callable) -> "MPoly":
        return MPoly({m: f(c) for m, c in self.terms.items()})

    def degree(self, sym) -> int:
        return max((mono_degree(m, sym) for m in self.terms), default=0)

    def partial(self, sym) -> "MPoly":
        out = {}
        for m, c in self.terms.items():
            e = mono_degree(m, sym)
            if e:
                nm = tuple((s, k - 1) if s == sym else (s, k) for s, k in m if not (s == sym and k == 1))
                out[nm] = c * e
        return MPoly(out)

    def coefficient_of(self, sym, k: int) -> "MPoly":
        """Coefficient of ``sym**k`` (a polynomial free of ``sym``)."""
        out = {}
        for m, c in self.terms.items():
            if mono_degree(m, sym) == k:
                out[tuple(p for p in m if p[0] != sym)] = c
        return MPoly(out)

    def substitute(self, values: dict) -> "MPoly":
        """Replace symbols by polynomials (or scalars)."""
        cache: dict = {}
        out = MPoly()
        for m, c in self.terms.items():
            keep = []
            factor = MPoly.constant(1)
            for s, e in m:
                if s in values:
                    key = (s, e)
                    if key not in cache:
                        v = values[s]
                        cache[key] = (v if isinstance(v, MPoly) else MPoly.constant(v)) ** e
                    factor = factor * cache[key]
                else:
                    keep.append((s, e))
            out = out + factor * MPoly({tuple(keep): c})
        return out

    def evaluate(self, values: dict, one):
        """Evaluate with every symbol bound; ``one`` fixes the target ring."""
        powers: dict = {}
        total = one * 0
        for m, c in self.terms.items():
            term = one * c
            for s, e in m:
                key = (s, e)
                if key not in powers:
                    powers[key] = values[s] ** e
                term = term * powers[key]
            total = total + term
        return total

    def sorted_terms(self, key=None):
        return sorted(self.terms.items(), key=key or (lambda mc: (sum(e for _, e in mc[0]), mc[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"{s}^{e}" if e != 1 else f"{s}" for s, e in m)
            parts.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(parts)
