"""Polynomials in a formal variable ``Y`` over truncated x-series.

``Y`` models the anti-holomorphic factor ``(1/2 pi i) / (tbar - t)``.  The
only structure beyond the ring operations is the derivation ``d/dx`` that
acts on coefficients and sends ``Y`` to ``rule * Y**2``.
"""

from __future__ import annotations

from .series import SeriesError, TruncatedSeries

__all__ = ["YSeries", "y_derive", "y_constant_term"]


class YSeries:
    __slots__ = ("terms", "prec", "var")

    def __init__(self, terms: dict[int, TruncatedSeries] | None = None, prec: int | None = None, var: str = "x"):
        terms = dict(terms or {})
        if prec is None:
            if not terms:
                raise ValueError("YSeries needs a precision when it has no terms")
            prec = min(s.prec for s in terms.values())
        clean = {}
        for k, s in terms.items():
            if k < 0:
                raise ValueError("negative power of Y")
            if s.prec < prec:
                prec = s.prec
        for k, s in terms.items():
            s = s.truncate(prec)
            if not s.is_zero():
                clean[k] = s
        self.terms: dict[int, TruncatedSeries] = clean
        self.prec = prec
        self.var = var

    @classmethod
    def from_series(cls, s: TruncatedSeries, power: int = 0) -> "YSeries":
        return cls({power: s}, s.prec, s.var)

    @classmethod
    def Y(cls, prec: int, var: str = "x") -> "YSeries":
        return cls({1: TruncatedSeries.constant(1, prec, var)}, prec, var)

    def coefficient(self, k: int) -> TruncatedSeries:
        return self.terms.get(k, TruncatedSeries.zero(self.prec, self.var))

    @property
    def degree(self) -> int:
        return max(self.terms, default=-1)

    def _coerce(self, other) -> "YSeries":
        if isinstance(other, YSeries):
            return other
        if isinstance(other, TruncatedSeries):
            return YSeries.from_series(other)
        return YSeries.from_series(TruncatedSeries.constant(other, self.prec, self.var))

    def __add__(self, other):
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        keys = set(self.terms) | set(o.terms)
        return YSeries({k: self.coefficient(k).truncate(prec) + o.coefficient(k).truncate(prec) for k in keys}, prec, self.var)

    __radd__ = __add__

    def __neg__(self):
        return YSeries({k: -s for k, s in self.terms.items()}, self.prec, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[int, TruncatedSeries] = {}
        products = []
        for a, sa in self.terms.items():
            for b, sb in o.terms.items():
                products.append((a + b, sa * sb))
        if not products:
            # zero times anything: precision of the product of the zero parts
            zero = TruncatedSeries.zero(self.prec, self.var) * TruncatedSeries.zero(o.prec, self.var)
            return YSeries({}, zero.prec, self.var)
        prec = min(p.prec for _, p in products)
        prec = min(prec, self.prec + min(s.val for s in o.terms.values()) if o.terms else prec)
        prec = min(prec, o.prec + min(s.val for s in self.terms.values()) if self.terms else prec)
        for k, p in products:
            p = p.truncate(prec)
            out[k] = out[k] + p if k in out else p
        return YSeries(out, prec, self.var)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a scalar or by a Y-free series."""
        o = self._coerce(other)
        if o.degree > 0:
            raise SeriesError("division by a series that depends on Y")
        return self * YSeries.from_series(o.coefficient(0).inverse())

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a YSeries")
        result = YSeries.from_series(TruncatedSeries.constant(1, self.prec, self.var))
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        for k in set(self.terms) | set(o.terms):
            if not self.coefficient(k).truncate(prec) == o.coefficient(k).truncate(prec):
                return False
        return True

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"Y^{k}: {s}" for k, s in sorted(self.terms.items()))
        return f"YSeries({{{inner}}}, prec={self.prec})"


def y_derive(e: YSeries, rule) -> YSeries:
    """Apply ``d/dx`` with ``dY/dx = rule * Y**2``.

    ``rule`` is a :class:`TruncatedSeries` in x (a rational function must be
    expanded by the caller).
    """
    if not isinstance(rule, TruncatedSeries):
        raise TypeError("the Y-derivation rule must be a TruncatedSeries")
    if e.prec - 1 < min(rule.val, 0) and e.terms:
        raise SeriesError("derivative would leave no known coefficients")
    # the unknown tail O(x^prec) of every coefficient feeds both terms
    out = YSeries({}, min(e.prec - 1, e.prec + rule.val), e.var)
    for k, s in e.terms.items():
        out = out + YSeries({k: s.derivative()}, None, e.var)
        if k:
            out = out + YSeries({k + 1: s * rule * k}, None, e.var)
    return out


def y_constant_term(e: YSeries) -> TruncatedSeries:
    """Coefficient of ``Y**0``: the holomorphic limit."""
    return e.coefficient(0)
