"""The elliptic ring realized in ``Q[[x]][Y]`` and its Gamma-invariant lifts.

With ``Y = (1/2 pi i) / (tbar - t)`` and the normalization that makes
``C w0**-2 dx/dT = 1``, one has ``dY/dx = (C / w0**2) Y**2`` and::

    S     = Y / w0**2
    K_x   = C Y / w0**2 - w0'/w0
    Gamma = 2 C Y / w0**2 + C'/C - 2 w0'/w0

so that ``D_x S = dS - 2 K S``, ``D_x K = dK - Gamma K`` and
``D_x C = dC - Gamma C + 2 K C``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exact import RationalFunction, SeriesError, TruncatedSeries, YSeries, y_constant_term, y_derive
from ..exact.poly import _ast_eval
from ..modular import eisenstein
from ..picard_fuchs import PeriodData, frobenius_solve, mirror_map, to_q
from .spec import ModelError, ModelSpec, load_model

__all__ = [
    "EllipticRealization",
    "LambdaLift",
    "elliptic_realization",
    "elliptic_periods",
    "lambda_lift_table",
    "validate_lift",
    "tilde_s_modular_check",
    "ModularCheck",
    "LiftRejected",
]


class LiftRejected(ValueError):
    pass


@dataclass(frozen=True)
class EllipticRealization:
    S: YSeries
    K: YSeries
    Gamma: YSeries
    C: RationalFunction
    C_series: TruncatedSeries
    rule: TruncatedSeries
    omega0: TruncatedSeries
    order: int

    def d(self, e: YSeries) -> YSeries:
        return y_derive(e, self.rule)

    def D_S(self) -> YSeries:
        return self.d(self.S) - self.K * self.S * 2

    def D_K(self) -> YSeries:
        return self.d(self.K) - self.Gamma * self.K

    def D_C(self) -> YSeries:
        c = YSeries.from_series(self.C_series)
        return YSeries.from_series(self.C_series.derivative()) - self.Gamma * c + self.K * c * 2

    def tilde_S(self, r: RationalFunction) -> YSeries:
        """``S + Delta S`` with ``Delta S = -(1/C)(w0'/w0) + r``."""
        prec = self.order + 1
        w0 = self.omega0
        inv_c = (1 / self.C).expand_at_zero(prec + 2)
        delta = -(inv_c * w0.derivative() / w0) + r.expand_at_zero(prec)
        return self.S + YSeries.from_series(delta)

    def identities(self) -> dict:
        """Residuals of the three defining identities (all must vanish)."""
        c = YSeries.from_series(self.C_series)
        return {
            "D_x S = -C S S": self.D_S() + c * self.S * self.S,
            "D_x K_x = -K_x K_x - 60 C": self.D_K() + self.K * self.K + c * 60,
            "D_x C = 0": self.D_C(),
        }


def elliptic_periods(m: ModelSpec, order: int) -> PeriodData:
    if m.kind != "elliptic":
        raise ModelError(f"model {m.name!r} is not elliptic")
    return mirror_map(frobenius_solve(m.pf_operator, order), q_scale=m.q_scale)


def elliptic_realization(m: ModelSpec, pd: PeriodData, order: int) -> EllipticRealization:
    """Generators as Y-series, exact through ``x**order``.

    ``pd`` must hold periods through at least ``x**(order + 4)``: poles of
    ``C`` and ``C'/C`` together with a derivative cost up to four orders.
    """
    if pd.order < order + 4:
        raise ModelError(f"periods known through x^{pd.order}; need x^{order + 4} for order {order}")
    prec = order + 5
    w0 = pd.omega0.truncate(prec)
    C = m.yukawa
    c_ser = C.expand_at_zero(prec)
    inv_w0_sq = (w0 * w0).inverse()
    rule = c_ser * inv_w0_sq
    Y = YSeries.Y(prec)
    logd = w0.derivative() / w0
    S = Y * YSeries.from_series(inv_w0_sq)
    K = Y * YSeries.from_series(rule) - YSeries.from_series(logd)
    G = Y * YSeries.from_series(rule * 2) + YSeries.from_series(c_ser.derivative() / c_ser - logd * 2)
    return EllipticRealization(S=S, K=K, Gamma=G, C=C, C_series=c_ser, rule=rule, omega0=w0, order=order)


@dataclass(frozen=True)
class LambdaLift:
    lam: Fraction
    r: RationalFunction
    closed_form: str = ""


def validate_lift(C: RationalFunction, r: RationalFunction) -> Fraction:
    """Return ``lambda`` with ``r' + C r**2 - 60 = lambda C``, or raise."""
    e = r.derivative() + C * r * r - 60
    ratio = e / C
    if not ratio.is_constant():
        raise LiftRejected(f"r' + C r^2 - 60 = {e} is not a constant multiple of C")
    return ratio.constant_value()


def lambda_lift_table(m: ModelSpec | None = None) -> list[LambdaLift]:
    """The lifts listed in the elliptic model file, each validated exactly."""
    m = m or load_model("elliptic")
    out = []
    for ent in m.lambda_lifts:
        lam = validate_lift(m.yukawa, ent.r)
        if lam != ent.lam:
            raise LiftRejected(f"r = {ent.r} gives lambda = {lam}, file says {ent.lam}")
        out.append(LambdaLift(lam, ent.r, ent.closed_form))
    return out


@dataclass(frozen=True)
class ModularCheck:
    ok: bool
    first_difference: tuple | None
    lhs: YSeries
    rhs: YSeries

    def __bool__(self):
        return self.ok


def _closed_form_q(text: str, order: int) -> YSeries:
    prec = order + 1
    e2 = YSeries.from_series(eisenstein(2, order).series)
    Y = YSeries.Y(prec, "q")
    names = {
        "E2": e2,
        "E2star": e2 - Y * 12,
        "E4": YSeries.from_series(eisenstein(4, order).series),
        "E6": YSeries.from_series(eisenstein(6, order).series),
        "Y": Y,
    }
    one = YSeries.from_series(TruncatedSeries.constant(1, prec, "q"))
    return _ast_eval(text, names, lambda v: one * v)


def tilde_s_modular_check(lift: LambdaLift, order: int, m: ModelSpec | None = None, pd: PeriodData | None = None) -> ModularCheck:
    """Compare ``S~`` with ``-(1/(12 w0**2)) * closed_form`` as q-series in Y.

    The Y-dependence is carried symbolically on both sides; ``Y`` itself is
    the same object in the x- and q-pictures.
    """
    m = m or load_model("elliptic")
    pd = pd or elliptic_periods(m, order + 4)
    real = elliptic_realization(m, pd, order)
    st = real.tilde_S(lift.r)
    lhs = YSeries({k: to_q(pd, s.truncate(min(s.prec, order + 1))) for k, s in st.terms.items()}, order + 1, "q")
    w0q = to_q(pd, real.omega0.truncate(order + 1))
    rhs = _closed_form_q(lift.closed_form, order) * YSeries.from_series((w0q * w0q).inverse() * Fraction(-1, 12))
    prec = min(lhs.prec, rhs.prec)
    for k in sorted(set(lhs.terms) | set(rhs.terms)):
        a = lhs.coefficient(k).truncate(prec)
        b = rhs.coefficient(k).truncate(prec)
        n = a.first_difference(b)
        if n is not None:
            return ModularCheck(False, (k, n), lhs, rhs)
    return ModularCheck(True, None, lhs, rhs)


def holomorphic_limit_commutes(real: EllipticRealization, e: YSeries) -> bool:
    """``y_constant_term`` intertwines d/dx on Y-series and on x-series."""
    a = y_constant_term(real.d(e))
    b = y_constant_term(e).derivative()
    try:
        return a == b
    except SeriesError:
        return False


__all__ += ["holomorphic_limit_commutes"]
