"""Truncated Laurent series with exact coefficients.

A :class:`TruncatedSeries` stands for

    sum_{n = val}^{prec - 1} c_n v^n + O(v^prec)

Every operation propagates the precision it can actually guarantee, so a
result never claims coefficients it does not know.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, as_fraction

__all__ = ["TruncatedSeries", "LogSeries", "SeriesError"]


class SeriesError(ArithmeticError):
    """Invalid series operation (bad valuation, precision underflow, ...)."""


class TruncatedSeries:
    __slots__ = ("val", "coeffs", "prec", "var")

    def __init__(self, coeffs=(), val: int = 0, prec: int | None = None, var: str = "x"):
        cs = [as_fraction(c) for c in coeffs]
        if prec is None:
            prec = val + len(cs)
        cs = cs[: max(prec - val, 0)]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        cs = cs[lead:]
        while cs and cs[-1] == 0:
            cs.pop()
        self.val = val + lead if cs else prec
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.prec = prec
        self.var = var

    # construction -------------------------------------------------------

    @classmethod
    def from_dict(cls, terms: dict, prec: int, var: str = "x") -> "TruncatedSeries":
        terms = {n: c for n, c in terms.items() if n < prec and c}
        if not terms:
            return cls((), prec, prec, var)
        lo = min(terms)
        cs = [terms.get(n, 0) for n in range(lo, max(terms) + 1)]
        return cls(cs, lo, prec, var)

    @classmethod
    def constant(cls, c, prec: int, var: str = "x") -> "TruncatedSeries":
        return cls([c], 0, prec, var)

    @classmethod
    def zero(cls, prec: int, var: str = "x") -> "TruncatedSeries":
        return cls((), prec, prec, var)

    @classmethod
    def from_poly(cls, p: Poly, prec: int, var: str | None = None) -> "TruncatedSeries":
        return cls(p.coeffs, 0, prec, var or p.var)

    @classmethod
    def monomial(cls, n: int, prec: int, c=1, var: str = "x") -> "TruncatedSeries":
        return cls([c], n, prec, var)

    # access -------------------------------------------------------------

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.prec:
            raise SeriesError(f"coefficient of {self.var}^{n} is beyond precision O({self.var}^{self.prec})")
        i = n - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def is_zero(self) -> bool:
        """True when no known coefficient is nonzero."""
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise SeriesError("valuation of a series with no known nonzero term")
        return self.val

    def coefficients(self, start: int | None = None, stop: int | None = None) -> list[Fraction]:
        """Dense list of coefficients for exponents ``start <= n < stop``."""
        start = min(self.val, 0) if start is None else start
        stop = self.prec if stop is None else min(stop, self.prec)
        return [self[n] for n in range(start, stop)]

    def as_dict(self) -> dict[int, Fraction]:
        return {self.val + i: c for i, c in enumerate(self.coeffs) if c}

    def truncate(self, prec: int) -> "TruncatedSeries":
        if prec > self.prec:
            raise SeriesError(f"cannot raise precision from {self.prec} to {prec}")
        return TruncatedSeries(self.coeffs, self.val, prec, self.var)

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.var != self.var:
                raise SeriesError(f"series in {self.var} combined with series in {other.var}")
            return other
        return TruncatedSeries.constant(as_fraction(other), max(self.prec, 1), self.var)

    def _known_lowest(self) -> int:
        return self.val if self.coeffs else self.prec

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        prec = min(self.prec, o.prec)
        lo = min(self._known_lowest(), o._known_lowest(), prec)
        return TruncatedSeries([self._get(n) + o._get(n) for n in range(lo, prec)], lo, prec, self.var)

    __radd__ = __add__

    def _get(self, n: int) -> Fraction:
        i = n - self.val
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.val, self.prec, self.var)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            return TruncatedSeries([c * a for a in self.coeffs], self.val, self.prec, self.var)
        o = self._coerce(other)
        va, vb = self._known_lowest(), o._known_lowest()
        prec = min(self.prec + vb, o.prec + va)
        if not self.coeffs or not o.coeffs:
            return TruncatedSeries.zero(prec, self.var)
        n = prec - va - vb
        if n <= 0:
            return TruncatedSeries.zero(prec, self.var)
        a, b = self.coeffs[:n], o.coeffs[:n]
        out = [Fraction(0)] * min(len(a) + len(b) - 1, n)
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(min(len(b), n - i)):
                out[i + j] += x * b[j]
        return TruncatedSeries(out, va + vb, prec, self.var)

    __rmul__ = __mul__

    def inverse(self) -> "TruncatedSeries":
        if not self.coeffs:
            raise SeriesError("inverting a series with no known nonzero coefficient")
        v = self.val
        n = self.prec - v
        a = self.coeffs
        a0 = a[0]
        b = [Fraction(0)] * n
        b[0] = 1 / a0
        for k in range(1, n):
            s = Fraction(0)
            for i in range(1, min(k, len(a) - 1) + 1):
                s += a[i] * b[k - i]
            b[k] = -s / a0
        return TruncatedSeries(b, -v, self.prec - 2 * v, self.var)

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                c = as_fraction(other)
            except TypeError:
                return NotImplemented
            if c == 0:
                raise ZeroDivisionError("series divided by zero")
            return self * (1 / c)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return TruncatedSeries.constant(1, max(self.prec - self.val, 1), self.var)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        """Coefficientwise equality up to the smaller precision."""
        try:
            o = self._coerce(other)
        except (TypeError, SeriesError):
            return NotImplemented
        prec = min(self.prec, o.prec)
        lo = min(self._known_lowest(), o._known_lowest())
        return all(self._get(n) == o._get(n) for n in range(lo, prec))

    __hash__ = None

    def first_difference(self, other) -> int | None:
        """Smallest exponent where the two series disagree, or ``None``."""
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        lo = min(self._known_lowest(), o._known_lowest())
        for n in range(lo, prec):
            if self._get(n) != o._get(n):
                return n
        return None

    # calculus -----------------------------------------------------------

    def derivative(self) -> "TruncatedSeries":
        return TruncatedSeries(
            [(self.val + i) * c for i, c in enumerate(self.coeffs)], self.val - 1, self.prec - 1, self.var
        )

    def theta(self) -> "TruncatedSeries":
        """``v d/dv``; keeps precision."""
        return TruncatedSeries([(self.val + i) * c for i, c in enumerate(self.coeffs)], self.val, self.prec, self.var)

    def integral(self) -> "TruncatedSeries":
        """Primitive with zero constant term."""
        if self._get(-1):
            raise SeriesError("cannot integrate a series with a residue term")
        terms = {n + 1: c / (n + 1) for n, c in self.as_dict().items()}
        return TruncatedSeries.from_dict(terms, self.prec + 1, self.var)

    def shift(self, n: int) -> "TruncatedSeries":
        """Multiply by ``v**n``."""
        return TruncatedSeries(self.coeffs, self.val + n, self.prec + n, self.var)

    def exp(self) -> "TruncatedSeries":
        if self._get(0) or (self.coeffs and self.val < 0):
            raise SeriesError("exp needs a series with positive valuation")
        prec = self.prec
        h = [self._get(k) for k in range(prec)]
        e = [Fraction(0)] * prec
        if prec > 0:
            e[0] = Fraction(1)
        for n in range(1, prec):
            s = Fraction(0)
            for k in range(1, n + 1):
                if h[k]:
                    s += k * h[k] * e[n - k]
            e[n] = s / n
        return TruncatedSeries(e, 0, prec, self.var)

    def log(self) -> "TruncatedSeries":
        if self.val != 0 or self._get(0) != 1:
            raise SeriesError("log needs a series with constant term 1")
        return (self.derivative() / self).integral()

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """``self(inner)``; ``inner`` must have positive valuation."""
        if not isinstance(inner, TruncatedSeries):
            raise TypeError("compose needs a TruncatedSeries")
        if not inner.coeffs or inner.val < 1:
            raise SeriesError("composition needs an inner series of positive valuation")
        vg = inner.val
        terms = self.as_dict()
        # the unknown tail O(u^prec) of self becomes O(v^(vg*prec))
        prec = vg * self.prec if self.prec > 0 else inner.prec
        if not terms:
            return TruncatedSeries.zero(prec, inner.var)
        lo, hi = min(terms), max(terms)
        acc = TruncatedSeries.constant(terms[hi], inner.prec + (hi - lo) * vg + 1, inner.var)
        for n in range(hi - 1, lo - 1, -1):
            acc = acc * inner + terms.get(n, 0)
        if lo < 0:
            acc = acc * inner.inverse() ** (-lo)
        elif lo > 0:
            acc = acc * inner**lo
        return acc.truncate(prec) if acc.prec > prec else acc

    def reversion(self) -> "TruncatedSeries":
        """Compositional inverse ``g`` with ``self(g) = v``; needs valuation 1."""
        if not self.coeffs or self.val != 1:
            raise SeriesError("functional inversion needs a series of valuation exactly 1")
        prec = self.prec
        ident = TruncatedSeries.monomial(1, prec, var=self.var)
        g = TruncatedSeries.monomial(1, prec, 1 / self.coeffs[0], self.var)
        if prec <= 2:
            return g
        dself = self.derivative()
        known = 2
        while True:
            err = self.compose(g) - ident
            g = (g - err / dself.compose(g)).truncate(prec)
            known = 2 * known - 1
            if known >= prec:
                break
        return g

    # presentation -------------------------------------------------------

    def __repr__(self):
        return f"TruncatedSeries({self})"

    def __str__(self):
        parts = []
        for n, c in sorted(self.as_dict().items())[:8]:
            cs = str(c.numerator) if c.denominator == 1 else f"({c})"
            mono = "" if n == 0 else (self.var if n == 1 else f"{self.var}^{n}")
            parts.append(cs if not mono else f"{cs}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({self.var}^{self.prec})"


class LogSeries:
    """``regular + log_coeff * log(v)`` with both parts truncated series."""

    __slots__ = ("regular", "log_coeff")

    def __init__(self, regular: TruncatedSeries, log_coeff: TruncatedSeries):
        prec = min(regular.prec, log_coeff.prec)
        self.regular = regular.truncate(prec)
        self.log_coeff = log_coeff.truncate(prec)

    @property
    def prec(self) -> int:
        return self.regular.prec

    @property
    def var(self) -> str:
        return self.regular.var

    def __add__(self, other):
        if isinstance(other, LogSeries):
            return LogSeries(self.regular + other.regular, self.log_coeff + other.log_coeff)
        return LogSeries(self.regular + other, self.log_coeff)

    __radd__ = __add__

    def __neg__(self):
        return LogSeries(-self.regular, -self.log_coeff)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LogSeries):
            raise SeriesError("product of two log-series would need log^2")
        return LogSeries(self.regular * other, self.log_coeff * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return LogSeries(self.regular / other, self.log_coeff / other)

    def theta(self) -> "LogSeries":
        return LogSeries(self.regular.theta() + self.log_coeff, self.log_coeff.theta())

    def derivative(self) -> "LogSeries":
        return LogSeries(self.regular.derivative() + self.log_coeff.shift(-1), self.log_coeff.derivative())

    def is_zero(self) -> bool:
        return self.regular.is_zero() and self.log_coeff.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.regular == other.regular and self.log_coeff == other.log_coeff

    __hash__ = None

    def __repr__(self):
        return f"LogSeries({self.regular} + ({self.log_coeff})*log({self.var}))"
