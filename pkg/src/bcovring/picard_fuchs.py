"""Frobenius solutions at a point of maximal unipotent monodromy.

Conventions.  ``log x`` is formal.  The second period is normalized as
``omega1 = omega0 * log x + (power series vanishing at 0)``, which is
``2 pi i`` times the period whose ratio with ``omega0`` is the flat
coordinate ``t``.  Hence ``T = 2 pi i t = log x + omega1_reg / omega0`` and
``q = exp(T) = x * exp(omega1_reg / omega0)`` has rational coefficients.

Throughout, ``order`` means "through ``x**order``", i.e. series carry
precision ``order + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exact import LogSeries, MPoly, Poly, RationalFunction, SeriesError, TruncatedSeries, parse_ratfunc
from .exact.poly import _ast_eval

__all__ = [
    "PFOperator",
    "PeriodData",
    "HolLimitConnections",
    "FrobeniusError",
    "frobenius_solve",
    "mirror_map",
    "yukawa_flat_check",
    "hol_connections",
]


class FrobeniusError(ValueError):
    """The operator is not of the supported shape at x = 0."""


@dataclass(frozen=True)
class PFOperator:
    """``sum_k coeffs[k](x) * theta**k`` with ``theta = x d/dx``."""

    coeffs: tuple[Poly, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise FrobeniusError("the zero operator")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, texts) -> "PFOperator":
        """Build from strings ``p_0(x), p_1(x), ...`` (polynomials in x)."""
        polys = []
        for t in texts:
            rf = parse_ratfunc(str(t))
            if not rf.den.is_constant():
                raise FrobeniusError(f"operator coefficient {t!r} is not a polynomial")
            polys.append(rf.num * (1 / rf.den[0]))
        return cls(tuple(polys))

    @classmethod
    def parse_expression(cls, text: str, var: str = "x") -> "PFOperator":
        """Parse e.g. ``"theta^2 - 12*x*(6*theta+1)*(6*theta+5)"``.

        Every monomial ``x^a theta^b`` is read with ``x^a`` to the left.
        """
        names = {var: MPoly.symbol("x"), "theta": MPoly.symbol("theta")}
        poly = _ast_eval(text, names, lambda v: MPoly.constant(Fraction(v)))
        if not isinstance(poly, MPoly):
            poly = MPoly.constant(poly)
        bad = poly.symbols() - {"x", "theta"}
        if bad:
            raise FrobeniusError(f"unexpected symbols {sorted(bad)} in operator")
        top = poly.degree("theta")
        coeffs = []
        for k in range(top + 1):
            part = poly.coefficient_of("theta", k)
            deg = part.degree("x")
            c = [Fraction(0)] * (deg + 1)
            for m, v in part.terms.items():
                if not isinstance(v, Fraction):
                    raise FrobeniusError("operator coefficients must be rational numbers")
                c[dict(m).get("x", 0)] += v
            coeffs.append(Poly(c, var))
        return cls(tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def theta_polynomials(self) -> list[Poly]:
        """``P_j(theta)`` with ``L = sum_j x**j P_j(theta)``."""
        top = max(p.degree for p in self.coeffs)
        return [Poly([p[j] for p in self.coeffs], "theta") for j in range(top + 1)]

    def indicial(self) -> Poly:
        return self.theta_polynomials()[0]

    def apply(self, f):
        """Apply to a :class:`TruncatedSeries` or :class:`LogSeries`."""
        acc = None
        term = f
        for k, p in enumerate(self.coeffs):
            if k:
                term = term.theta()
            if p.is_zero():
                continue
            piece = term * TruncatedSeries.from_poly(p, f.prec + p.degree + 1)
            acc = piece if acc is None else acc + piece
        return acc


@dataclass(frozen=True)
class PeriodData:
    omega0: TruncatedSeries
    omega1: LogSeries
    order: int
    mirror_t: LogSeries | None = None
    q_of_x: TruncatedSeries | None = None
    x_of_q: TruncatedSeries | None = None


@dataclass(frozen=True)
class HolLimitConnections:
    ttK: TruncatedSeries
    ttGamma: TruncatedSeries
    dtdx: TruncatedSeries
    extras: dict = field(default_factory=dict)


def _dual_eval(p: Poly, a: Fraction) -> tuple[Fraction, Fraction]:
    return p(a), p.derivative()(a)


def frobenius_solve(op: PFOperator, order: int) -> PeriodData:
    """Holomorphic and single-log Frobenius solutions through ``x**order``."""
    if order < 0:
        raise FrobeniusError("order must be non-negative")
    thetas = op.theta_polynomials()
    p0 = thetas[0]
    n_ord = op.order
    if n_ord < 2 or p0.degree != n_ord or any(p0.coeffs[:-1]):
        raise FrobeniusError(f"indicial polynomial {p0} is not c*theta^{n_ord}; x = 0 is not maximally unipotent")
    # a_n(eps) to first order in eps, stored as (value, d/deps)
    a = [(Fraction(1), Fraction(0))]
    for n in range(1, order + 1):
        u0 = u1 = Fraction(0)
        for j in range(1, min(n, len(thetas) - 1) + 1):
            pv, pd = _dual_eval(thetas[j], Fraction(n - j))
            b0, b1 = a[n - j]
            u0 -= pv * b0
            u1 -= pv * b1 + pd * b0
        v0, v1 = _dual_eval(p0, Fraction(n))
        a.append((u0 / v0, (u1 * v0 - u0 * v1) / (v0 * v0)))
    prec = order + 1
    omega0 = TruncatedSeries([c for c, _ in a], 0, prec)
    reg = TruncatedSeries([d for _, d in a], 0, prec)
    return PeriodData(omega0=omega0, omega1=LogSeries(reg, omega0), order=order)


def mirror_map(pd: PeriodData, order: int | None = None, q_scale=1) -> PeriodData:
    """Attach ``T(x)``, ``q(x)`` and the inverse ``x(q)``.

    ``q_scale`` absorbs a constant ``c`` in the regular part of ``omega1``
    (a different symplectic basis) as ``q -> exp(c) q``; it must be given as
    the rational number ``exp(c)``.
    """
    order = pd.order if order is None else order
    if order > pd.order:
        raise FrobeniusError(f"periods known through x^{pd.order}, asked for {order}")
    prec = order + 1
    w0 = pd.omega0.truncate(prec)
    ratio = pd.omega1.regular.truncate(prec) / w0
    mirror_t = LogSeries(ratio, TruncatedSeries.constant(1, prec))
    q_of_x = ratio.exp().shift(1) * Fraction(q_scale)
    if q_of_x[1] == 0:
        raise FrobeniusError("q_scale must be nonzero")
    try:
        inv = q_of_x.reversion()
    except SeriesError as exc:
        raise FrobeniusError(f"mirror map is not invertible: {exc}") from None
    x_of_q = TruncatedSeries(inv.coeffs, inv.val, inv.prec, "q")
    return replace(pd, mirror_t=mirror_t, q_of_x=q_of_x, x_of_q=x_of_q)


def _require_mirror(pd: PeriodData):
    if pd.x_of_q is None or pd.mirror_t is None:
        raise FrobeniusError("mirror map not computed; call mirror_map first")


def dT_dx(pd: PeriodData) -> TruncatedSeries:
    """``d(2 pi i t)/dx = 1/x + d/dx(omega1_reg/omega0)`` (Laurent)."""
    _require_mirror(pd)
    ratio = pd.mirror_t.regular
    return ratio.derivative() + TruncatedSeries.monomial(-1, ratio.prec - 1)


def to_q(pd: PeriodData, s: TruncatedSeries) -> TruncatedSeries:
    """Substitute the inverse mirror map ``x = x(q)``."""
    _require_mirror(pd)
    return s.compose(pd.x_of_q)


def yukawa_flat_check(pd: PeriodData, C: RationalFunction, order: int | None = None, indices: int = 1) -> TruncatedSeries:
    """``C * (dx/dT)**indices / omega0**2`` as a q-series.

    ``indices`` is the number of lower indices of the coupling (1 for the
    elliptic curve, 3 for a threefold).  For the elliptic model the result is
    the constant 1; for a threefold its constant term is the classical
    triple intersection number.
    """
    _require_mirror(pd)
    order = pd.order if order is None else order
    prec = order + 1
    c_ser = C.expand_at_zero(prec + 1)
    dxdT = dT_dx(pd).inverse()
    expr = c_ser * dxdT**indices / pd.omega0**2
    expr = expr.truncate(min(expr.prec, prec))
    return to_q(pd, expr)


def hol_connections(pd: PeriodData, order: int | None = None) -> HolLimitConnections:
    """Holomorphic-limit Kahler connection and Christoffel symbol in x."""
    _require_mirror(pd)
    order = pd.order if order is None else order
    w0 = pd.omega0.truncate(order + 1)
    ttK = -(w0.derivative() / w0)
    dtdx = dT_dx(pd)
    dtdx = dtdx.truncate(min(dtdx.prec, order))
    ttGamma = dtdx.derivative() / dtdx
    return HolLimitConnections(ttK=ttK, ttGamma=ttGamma, dtdx=dtdx)
