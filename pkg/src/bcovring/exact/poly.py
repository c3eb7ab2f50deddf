"""Univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction`.  Both classes are immutable
and kept in canonical form, so ``==`` is structural equality.
"""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = ["Poly", "RationalFunction", "parse_ratfunc", "as_fraction"]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class Poly:
    """Dense polynomial in one variable, coefficients low degree first."""

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs=(), var: str = "x"):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.var = var

    @classmethod
    def constant(cls, c, var: str = "x") -> "Poly":
        return cls([c], var)

    @classmethod
    def monomial(cls, n: int, c=1, var: str = "x") -> "Poly":
        return cls([0] * n + [c], var)

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, n: int) -> Fraction:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return Fraction(0)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([as_fraction(other)], self.var)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly([self[i] + o[i] for i in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Poly([], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly([1], self.var), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quot = [Fraction(0)] * max(len(rem) - len(o.coeffs) + 1, 0)
        lead = o.lc
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + o.degree] / lead
            quot[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot, self.var), Poly(rem[: o.degree], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        return RationalFunction(self, self._coerce(other))

    def __rtruediv__(self, other):
        return RationalFunction(self._coerce(other), self)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, RationalFunction):
            return other == self
        try:
            return self.coeffs == Poly([as_fraction(other)]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly([c / self.lc for c in self.coeffs], self.var)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def valuation(self) -> int:
        """Order of vanishing at 0 (``-1`` never; zero polynomial raises)."""
        if self.is_zero():
            raise ValueError("valuation of the zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError

    def shift(self, n: int) -> "Poly":
        """Multiply by ``var**n`` (``n`` may be negative if divisible)."""
        if n >= 0:
            return Poly([0] * n + list(self.coeffs), self.var)
        if any(self.coeffs[: -n]):
            raise ValueError("polynomial not divisible by the requested power")
        return Poly(self.coeffs[-n:], self.var)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return _poly_str(self.coeffs, self.var)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_str(coeffs, var) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            mono = ""
        elif i == 1:
            mono = var
        else:
            mono = f"{var}^{i}"
        if not mono:
            body = _frac_str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_frac_str(abs(c))}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class RationalFunction:
    """Reduced quotient ``num/den`` with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly([as_fraction(num)])
        if den is None:
            den = Poly([1], num.var)
        elif not isinstance(den, Poly):
            den = Poly([as_fraction(den)], num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1], num.var)
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num, den = num // g, den // g
                lead = den.lc
                if lead != 1:
                    num = Poly([c / lead for c in num.coeffs], num.var)
                    den = Poly([c / lead for c in den.coeffs], den.var)
        self.num = num
        self.den = den

    @property
    def var(self) -> str:
        return self.num.var

    @classmethod
    def from_value(cls, value, var: str = "x") -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Poly):
            return cls(value, _reduced=False)
        return cls(Poly([as_fraction(value)], var), Poly([1], var), _reduced=True)

    @classmethod
    def variable(cls, var: str = "x") -> "RationalFunction":
        return cls(Poly([0, 1], var), Poly([1], var), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(Poly([as_fraction(other)], self.var), Poly([1], self.var), _reduced=True)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num.coeffs == o.num.coeffs and self.den.coeffs == o.den.coeffs

    def __hash__(self):
        if self.is_constant():
            return hash(self.num[0])
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """Substitute ``inner`` for the variable."""
        inner = self._coerce(inner)

        def horner(p: Poly):
            acc = RationalFunction.from_value(0, inner.var)
            for c in reversed(p.coeffs):
                acc = acc * inner + c
            return acc

        return horner(self.num) / horner(self.den)

    def expand_at_zero(self, order: int):
        """Laurent expansion at ``var = 0`` known modulo ``var**order``."""
        from .series import TruncatedSeries

        num = TruncatedSeries.from_poly(self.num, order + 2 * self.den.degree + 2)
        den = TruncatedSeries.from_poly(self.den, order + 2 * self.den.degree + 2)
        return (num / den).truncate(order)

    def __repr__(self):
        return f"RationalFunction({self})"

    def integer_form(self) -> tuple[Poly, Poly]:
        """``(N, D)`` with integer coefficients and no common content.

        The lowest-order coefficient of ``D`` is positive.
        """
        coeffs = [c for c in self.num.coeffs + self.den.coeffs if c]
        lcm = 1
        for c in coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        n = [c * lcm for c in self.num.coeffs]
        d = [c * lcm for c in self.den.coeffs]
        g = 0
        for c in n + d:
            g = math.gcd(g, int(c))
        g = g or 1
        if next(c for c in d if c) < 0:
            g = -g
        return Poly([c / g for c in n], self.var), Poly([c / g for c in d], self.var)

    def __str__(self):
        if self.den.is_constant():
            return str(self.num)
        n, d = self.integer_form()
        ns = str(n)
        if len(n.coeffs) > 1 or n.coeffs[0] < 0:
            ns = f"({ns})"
        ds = str(d) if len(d.coeffs) == 1 else f"({d})"
        if len([c for c in d.coeffs if c]) == 1 and d.coeffs[-1] == 1:
            ds = str(d)
        return f"{ns}/{ds}"


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def _ast_eval(text: str, names: dict, lift):
    """Evaluate an arithmetic expression over bound names.

    Integer literals go through ``lift``; operators are ``+ - * /`` and
    ``^``/``**`` with integer exponents.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return lift(node.value)
        if isinstance(node, ast.Name):
            if node.id not in names:
                raise ValueError(f"unknown symbol {node.id!r} in {text!r}")
            return names[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = node.right
                sign = 1
                if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                    sign, exp = -1, exp.operand
                if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                    raise ValueError(f"non-integer exponent in {text!r}")
                return ev(node.left) ** (sign * exp.value)
            if isinstance(node.op, ast.Div) and isinstance(node.right, ast.Constant):
                # keep rational constants exact for scalar-only rings
                return ev(node.left) / Fraction(node.right.value)
            op = _BINOPS.get(type(node.op))
            if op is not None:
                return op(ev(node.left), ev(node.right))
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_ratfunc(text: str, var: str = "x", names: dict | None = None) -> RationalFunction:
    """Parse an integer-coefficient expression such as ``"5/(x^3*(1-3125*x))"``.

    Allowed: integer literals, the variable, ``+ - * /``, ``^`` or ``**``
    with integer exponents, parentheses.  ``names`` binds extra identifiers
    to rational functions (used for auxiliary polynomials in model files).
    """
    names = dict(names or {})
    names.setdefault(var, RationalFunction.variable(var))
    value = _ast_eval(text, names, lambda v: RationalFunction.from_value(v, var))
    return RationalFunction.from_value(value, var)
