"""Genus-by-genus solution of the holomorphic anomaly equation (one modulus).

Everything is done in the hatted basis ``Sxx, hSx, hS, Kx, Cxxx`` where
``F^(g)`` is K-free.  Writing ``F(Sxx, Sx, S, K) = F^(Sxx, hSx, hS)`` with
``hSx = Sx - Sxx K`` and ``hS = S - Sx K + Sxx K^2 / 2`` gives::

    dF/dSxx |_(Sx, S, K) = dF^/dSxx - K dF^/dhSx + K^2/2 dF^/dhS

so splitting the right-hand side by powers of ``K`` as
``R0 + R1 K + R2 K^2`` yields ``dF^/dSxx = R0``, ``dF^/dhSx = -R1`` and
``dF^/dhS = 2 R2``.  In terms of ``RHS = Qxx + 2 Qx K + Q K^2 / 2`` this is
``(Qxx, -2 Qx, Q)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import MPoly, RationalFunction, TruncatedSeries
from .exact.mpoly import mono_degree, mono_mul
from .models.holomorphic import HolPropagators
from .models.spec import ModelError, ModelSpec
from .picard_fuchs import PeriodData, to_q
from .ring import (
    C,
    DerivationTable,
    K,
    RingElement,
    RingError,
    S,
    Si,
    Sij,
    check_weight,
    covariant_derive,
    hS,
    hSi,
    k_expand,
    lifted_table,
    reduced_table,
    sym,
    unhat_transform,
)

__all__ = [
    "RhsTargets",
    "GenusSolution",
    "IntegrationError",
    "genus_one_seed",
    "assemble_rhs",
    "integrate_targets",
    "solve_to_genus",
    "holomorphic_evaluate",
    "solver_table",
]

A, B, Z = Sij(1, 1), hSi(1), hS()
KX = K(1)


class IntegrationError(RingError):
    pass


@dataclass(frozen=True)
class RhsTargets:
    g: int
    Qxx: RingElement
    Qx: RingElement
    Q: RingElement
    rhs: RingElement

    @property
    def partials(self) -> dict:
        """Targets for ``dF/dSxx, dF/dhSx, dF/dhS``."""
        return {A: self.Qxx, B: self.Qx * Fraction(-2), Z: self.Q}


@dataclass
class GenusSolution:
    genus: int
    F: RingElement
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        d = self.diagnostics
        return bool(d) and all(v is True for k, v in d.items() if k.endswith("_ok"))


def solver_table(m: ModelSpec, variant: str = "reduced") -> DerivationTable:
    if variant == "reduced":
        return reduced_table(1, basis="hat")
    if variant == "lifted":
        return lifted_table(m.lift_data(), basis="hat")
    raise ValueError(f"unknown variant {variant!r}; use 'reduced' or 'lifted'")


def _require_threefold(m: ModelSpec):
    if m.kind != "threefold":
        raise ModelError(f"model {m.name!r} (kind {m.kind!r}) is not a threefold; the anomaly recursion assumes threefold weights")


def genus_one_seed(m: ModelSpec, variant: str = "reduced") -> RingElement:
    """``D_x F^(1) = Cxxx Sxx / 2 - (chi/24 - 1) Kx`` (plus ``(log f0)'`` when lifted)."""
    _require_threefold(m)
    if m.chi is None:
        raise ModelError(f"model {m.name!r} has no chi")
    a = Fraction(m.chi, 24) - 1
    if variant == "reduced":
        poly = sym(C(1, 1, 1)) * sym(A) * Fraction(1, 2) - sym(KX, a)
    elif variant == "lifted":
        poly = sym(A) * (m.yukawa * Fraction(1, 2)) - sym(KX, a)
        if m.f0 is not None:
            poly = poly + MPoly.constant(m.f0.derivative() / m.f0)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return RingElement(poly, 0, (1,), (), 1)


def assemble_rhs(g: int, solutions: dict, seed: RingElement, table: DerivationTable) -> RhsTargets:
    """``(1/2) D D F^(g-1) + (1/2) sum_h D F^(g-h) D F^(h)`` split by K."""
    if g < 2:
        raise ValueError("the recursion starts at genus 2")
    dF = {1: seed}
    for h in range(2, g):
        if h not in solutions:
            raise KeyError(f"missing genus-{h} solution")
        sol = solutions[h]
        dF[h] = covariant_derive(sol.F if isinstance(sol, GenusSolution) else sol, 1, table)
    rhs = covariant_derive(dF[g - 1], 1, table) * Fraction(1, 2)
    for h in range(1, g):
        rhs = rhs + dF[g - h] * dF[h] * Fraction(1, 2)
    parts = k_expand(rhs, max_degree=2)

    def part(k):
        p = parts.get(((KX, k),) if k else ())
        return RingElement(p.poly if p is not None else MPoly(), rhs.weight, (1,) * (2 - k), (), 1)

    R0, R1, R2 = part(0), part(1), part(2)
    for R in (R0, R1, R2):
        bad = [gen for gen in R.generators() if gen.kind in ("Si", "S")]
        if bad:
            raise RingError(f"plain generators {bad} in hatted right-hand side")
    return RhsTargets(g, R0, R1 * Fraction(1, 2), R2 * 2, rhs)


def integrate_targets(t: RhsTargets, g: int | None = None, weight: int | None = None) -> GenusSolution:
    """Reconstruct ``F^(g)`` from its three partial derivatives."""
    g = t.g if g is None else g
    weight = 2 - 2 * g if weight is None else weight
    tg = t.partials
    out: dict = {}
    gens = (A, B, Z)
    for pos, gen in enumerate(gens):
        earlier = gens[:pos]
        for m, c in tg[gen].poly.terms.items():
            if any(mono_degree(m, e) for e in earlier):
                continue
            if any(gg.kind == "K" for gg, _ in m):
                raise IntegrationError(f"target for {gen!r} contains K: {t.Qxx.monomial_name(m)}")
            k = mono_degree(m, gen)
            nm = _bump(m, gen)
            val = c * Fraction(1, k + 1)
            out[nm] = out[nm] + val if nm in out else val
    F = RingElement(MPoly(out), weight, (), (), 1)
    diag: dict = {}
    for gen in gens:
        resid = F.poly.partial(gen) - tg[gen].poly
        if not resid.is_zero():
            mono, _ = sorted(resid.terms.items(), key=lambda mc: repr(mc[0]))[0]
            raise IntegrationError(f"genus {g}: inconsistent partial d/d{gen!r} at monomial {F.monomial_name(mono)}")
        diag[f"partial_{gen!r}_ok"] = True
    pairs = [(A, B), (A, Z), (B, Z)]
    for a, b in pairs:
        diag[f"mixed_{a!r}_{b!r}_ok"] = tg[a].poly.partial(b) == tg[b].poly.partial(a)
    free_terms = [m for m in F.poly.terms if not any(mono_degree(m, x) for x in gens)]
    if free_terms:
        raise IntegrationError(f"genus {g}: propagator-free term {F.monomial_name(free_terms[0])}")
    deg = max((sum(e for gg, e in m if gg in gens) for m in F.poly.terms), default=0)
    diag["degree_bound_ok"] = deg <= 3 * g - 3
    diag["weight_ok"] = bool(check_weight(F)) if _numeric(F) else True
    return GenusSolution(g, F, diag)


def _numeric(e: RingElement) -> bool:
    return all(not isinstance(c, RationalFunction) or c.is_constant() for c in e.poly.terms.values())


def _bump(m: tuple, gen) -> tuple:
    return mono_mul(m, ((gen, 1),))


def _plain_checks(sol: GenusSolution, t: RhsTargets) -> dict:
    """Checks in the original generators ``Sxx, Sx, S, Kx``."""
    Fp = unhat_transform(sol.F).poly
    rhs_p = unhat_transform(t.rhs).poly
    kres = sym(A) * Fp.partial(Si(1)) + sym(Si(1)) * Fp.partial(S()) + Fp.partial(KX)
    return {
        "k_constraint_ok": kres.is_zero(),
        "plain_equation_ok": Fp.partial(A) == rhs_p,
        "k_free_ok": not any(gg.kind == "K" for gg in sol.F.generators()),
        "k_residual": RingElement(kres, sol.F.weight, (1,), (), 1),
    }


def solve_to_genus(m: ModelSpec, gmax: int, variant: str = "reduced", table: DerivationTable | None = None) -> list[GenusSolution]:
    """Solutions for ``g = 2 .. gmax``; Lifted adds the ambiguity ``f_g``."""
    if gmax < 2:
        raise ValueError("gmax must be at least 2 (the recursion starts at genus 2)")
    _require_threefold(m)
    table = table or solver_table(m, variant)
    seed = genus_one_seed(m, variant)
    sols: dict = {}
    for g in range(2, gmax + 1):
        t = assemble_rhs(g, sols, seed, table)
        sol = integrate_targets(t, g)
        checks = _plain_checks(sol, t)
        sol.diagnostics.update({k: v for k, v in checks.items() if k != "k_residual"})
        sol.diagnostics["k_residual"] = checks["k_residual"]
        if t.rhs.poly and _numeric(t.rhs):
            sol.diagnostics["rhs_weight_ok"] = bool(check_weight(t.rhs))
        if variant == "lifted":
            fg = m.ambiguity(g)
            if not fg.is_zero():
                sol = GenusSolution(g, sol.F + MPoly.constant(fg), sol.diagnostics)
        sols[g] = sol
    return [sols[g] for g in range(2, gmax + 1)]


def _coeff_series(c, prec: int) -> TruncatedSeries:
    if isinstance(c, RationalFunction):
        return c.expand_at_zero(prec)
    return TruncatedSeries.constant(c, prec)


def holomorphic_evaluate(sol, m: ModelSpec, pd: PeriodData, props: HolPropagators, order: int | None = None, in_q: bool = True) -> TruncatedSeries:
    """Substitute holomorphic-limit propagators; return a q-series (or x-series)."""
    F = sol.F if isinstance(sol, GenusSolution) else sol
    Fp = unhat_transform(F).poly
    base = min(props.ttSxx.prec, props.ttSx.prec, props.ttS.prec, props.ttK.prec)
    prec = base + 8
    vals = {A: props.ttSxx, Si(1): props.ttSx, S(): props.ttS, KX: props.ttK, C(1, 1, 1): props.C}
    total = TruncatedSeries.zero(base)
    powers: dict = {}
    for mono, c in Fp.terms.items():
        term = _coeff_series(c, prec)
        for gen, e in mono:
            if gen not in vals:
                raise RingError(f"no holomorphic value for {gen!r}")
            key = (gen, e)
            if key not in powers:
                powers[key] = vals[gen] ** e
            term = term * powers[key]
        total = total + term
    if order is not None:
        if total.prec < order + 1:
            raise ValueError(f"order underflow: result known modulo x^{total.prec}, asked through x^{order}")
        total = total.truncate(order + 1)
    if not total.is_zero() and total.prec <= total.valuation():
        raise ValueError("order underflow: no coefficients known")
    return to_q(pd, total) if in_q else total
