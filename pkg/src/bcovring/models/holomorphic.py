"""Holomorphic-limit propagators and the lift-data checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exact import RationalFunction, TruncatedSeries, parse_ratfunc
from ..picard_fuchs import HolLimitConnections, PeriodData, frobenius_solve, hol_connections, mirror_map
from .spec import ModelError, ModelSpec

__all__ = [
    "HolPropagators",
    "model_periods",
    "hol_propagators",
    "threefold_system_residuals",
    "cusp_exchange_check",
    "CuspCheck",
]


@dataclass(frozen=True)
class HolPropagators:
    ttSxx: TruncatedSeries
    ttSx: TruncatedSeries
    ttS: TruncatedSeries
    ttK: TruncatedSeries
    ttGamma: TruncatedSeries
    C: TruncatedSeries
    residuals: dict = field(default_factory=dict)

    def all_zero(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values())


def model_periods(m: ModelSpec, order: int) -> PeriodData:
    if m.pf_operator is None:
        raise ModelError(f"model {m.name!r} has no Picard-Fuchs operator")
    return mirror_map(frobenius_solve(m.pf_operator, order), q_scale=m.q_scale)


def _ex(rf: RationalFunction, prec: int) -> TruncatedSeries:
    return rf.expand_at_zero(prec)


def _elliptic_props(m: ModelSpec, hc: HolLimitConnections, order: int, lam) -> HolPropagators:
    lifts = [l for l in m.lambda_lifts if l.lam == Fraction(lam)]
    if not lifts:
        raise ModelError(f"no lift with lambda = {lam} in model {m.name!r}")
    prec = min(order + 1, hc.ttK.prec)
    C = m.yukawa
    ttK = hc.ttK.truncate(prec)
    # holomorphic limit of S~ = Y/w0^2 - (1/C) w0'/w0 + r: Y -> 0
    ttS = (_ex(1 / C, prec + 2) * ttK + _ex(lifts[0].r, prec)).truncate(prec)
    zero = TruncatedSeries.zero(prec)
    return HolPropagators(zero, zero, ttS, ttK, hc.ttGamma, _ex(C, prec))


def hol_propagators(m: ModelSpec, pd: PeriodData, order: int | None = None, lam=Fraction(1, 144)) -> HolPropagators:
    """Solve the holomorphic-limit equations for the propagators.

    Threefold (one modulus)::

        ttSxx = (2 ttK + f - ttGamma) / C
        ttSx  = (-ttK' + ttK^2 + f ttK + h) / C
        ttS   = (D ttSx + C ttSx ttSxx - E_xx ttK - E_x) / 2

    with ``D ttSx = ttSx' + ttGamma ttSx - 2 ttK ttSx``.  The residuals of
    the four lifted derivative equations are attached; they vanish exactly
    when the lift data is consistent.  For the elliptic model only ``ttS``
    is meaningful and is taken from the lift with parameter ``lam``.
    """
    order = pd.order if order is None else order
    if m.kind == "elliptic":
        hc = hol_connections(pd, min(order + 1, pd.order))
        return _elliptic_props(m, hc, order, lam)
    hc = hol_connections(pd, order)
    if m.kind != "threefold":
        raise ModelError(f"model {m.name!r} of kind {m.kind!r} has no propagators")
    L = m.lift
    missing = [k for k in ("f", "h", "E_xx", "E_x") if k not in L]
    if missing:
        raise ModelError(f"model {m.name!r} lacks lift data {missing}")
    P = order + 4
    C = _ex(m.yukawa, P)
    Cinv = _ex(1 / m.yukawa, P)
    if Cinv.valuation() < 0:
        raise ModelError("Laurent-tail overflow: 1/C has a pole at x = 0")
    K, G = hc.ttK, hc.ttGamma
    f, h = _ex(L["f"], P), _ex(L["h"], P)
    Exx, Ex = _ex(L["E_xx"], P), _ex(L["E_x"], P)
    Sxx = (K * 2 + f - G) * Cinv
    Sx = (-K.derivative() + K * K + f * K + h) * Cinv
    DSx = Sx.derivative() + G * Sx - K * Sx * 2
    S = (DSx + C * Sx * Sxx - Exx * K - Ex) * Fraction(1, 2)
    props = HolPropagators(Sxx, Sx, S, K, G, C)
    return HolPropagators(Sxx, Sx, S, K, G, C, threefold_system_residuals(m, props))


def threefold_system_residuals(m: ModelSpec, p: HolPropagators) -> dict:
    """LHS - RHS of the four lifted derivative equations in the holomorphic limit."""
    L = m.lift
    prec = max(p.ttSxx.prec, p.ttK.prec) + 4
    C, K, G = p.C, p.ttK, p.ttGamma
    Exx, Ex = _ex(L["E_xx"], prec), _ex(L["E_x"], prec)
    E = _ex(L["E"], prec) if "E" in L else None
    Ck = _ex(L["kappa_times_yukawa"], prec) if "kappa_times_yukawa" in L else _ex(L["h"], prec)
    Sxx, Sx, S = p.ttSxx, p.ttSx, p.ttS
    D_Sxx = Sxx.derivative() + G * Sxx * 2 - K * Sxx * 2
    D_Sx = Sx.derivative() + G * Sx - K * Sx * 2
    D_S = S.derivative() - K * S * 2
    D_K = K.derivative() - G * K
    out = {
        "D Sxx = 2 Sx - C Sxx^2 + E_xx": D_Sxx - (Sx * 2 - C * Sxx * Sxx + Exx),
        "D Sx = 2 S - C Sx Sxx + E_xx K + E_x": D_Sx - (S * 2 - C * Sx * Sxx + Exx * K + Ex),
        "D K = -K^2 + C Sxx K - C Sx + C kappa": D_K - (-(K * K) + C * Sxx * K - C * Sx + Ck),
    }
    if E is not None:
        out["D S = -C Sx^2/2 + E_xx K^2/2 + E_x K + E"] = D_S - (-(C * Sx * Sx) * Fraction(1, 2) + Exx * K * K * Fraction(1, 2) + Ex * K + E)
    return out


@dataclass(frozen=True)
class CuspCheck:
    relations: dict
    denominators: dict

    @property
    def ok(self) -> bool:
        return all(self.relations.values()) and all(self.denominators.values())


def _tensor_pullback(f: RationalFunction, lower: int, upper: int, x_of_z: RationalFunction) -> RationalFunction:
    """Components in z of a tensor given in x: ``f(x(z)) (dx/dz)^lower (dz/dx)^upper``."""
    dxdz = x_of_z.derivative()
    return f.compose(x_of_z) * dxdz ** (lower - upper)


def cusp_exchange_check(m: ModelSpec, probes: tuple = ("1/x^3", "5/(x^3*(1-x))")) -> CuspCheck:
    """Check the stated exchange relations under ``z = cusp_map(x)``.

    The z-side lift data is obtained by the tensor law (``E_i^{kl}`` has one
    lower and two upper indices, ``E_i^k`` one and one, ``E_i`` one lower,
    ``kappa^m`` one upper).  The relations compare it with the shorthand
    forms ``E_z^{zz} = E_x^{xx} dz/dx``, ``E_z^z = E_x^x``,
    ``E_z = E_x dx/dz``, ``kappa^z = kappa^x dz/dx``.  Since only ``C kappa``
    is given, kappa is formed with a few probe couplings C; the coupling
    cancels from the relation.
    """
    if m.cusp_map is None:
        raise ModelError(f"model {m.name!r} has no cusp_map")
    L = m.lift
    z_of_x = m.cusp_map
    # x(z) for an involutive map such as z = 1/x
    x_of_z = z_of_x.compose(z_of_x)
    if x_of_z != RationalFunction.variable(m.var):
        raise ModelError("only involutive cusp maps are supported")
    x_of_z = z_of_x
    dzdx_in_z = z_of_x.derivative().compose(x_of_z)
    dxdz = x_of_z.derivative()

    def in_z(f):
        return f.compose(x_of_z)

    rel = {}
    rel["E_z^zz = E_x^xx dz/dx"] = _tensor_pullback(L["E_xx"], 1, 2, x_of_z) == in_z(L["E_xx"]) * dzdx_in_z
    rel["E_z^z = E_x^x"] = _tensor_pullback(L["E_x"], 1, 1, x_of_z) == in_z(L["E_x"])
    rel["E_z = E_x dx/dz"] = _tensor_pullback(L["E"], 1, 0, x_of_z) == in_z(L["E"]) * dxdz
    ck = L.get("kappa_times_yukawa")
    if ck is None and "kappa" in L:
        ck = L["kappa"] * m.yukawa
    if ck is not None:
        ok = True
        for probe in probes:
            Cx = parse_ratfunc(probe, m.var)
            kappa_x = ck / Cx
            # kappa^z through C kappa (two lower) and C (three lower)
            kz = _tensor_pullback(ck, 2, 0, x_of_z) / _tensor_pullback(Cx, 3, 0, x_of_z)
            ok = ok and kz == in_z(kappa_x) * dzdx_in_z
        rel["kappa^z = kappa^x dz/dx"] = ok
    dens = {}
    for key, den in m.expected_denominators.items():
        dens[key] = L[key].den == den.num * (1 / den.num.coeffs[-1])
    return CuspCheck(rel, dens)
