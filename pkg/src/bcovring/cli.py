"""Command-line driver: ``bcovring pf | verify | solve``.

Reports are JSON with sorted keys; rationals are ``"p/q"`` strings.  The exit
code is 0 iff every check in the run passed, 1 if a check failed, 2 for a
usage error and 3 when the model cannot be loaded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import RationalFunction, TruncatedSeries, YSeries
from .modular import (
    AlmostHolPoly,
    QuasiModularPoly,
    ZEntry,
    almost_hol_derive,
    eisenstein,
    eta24,
    evaluate,
    kz_constant_term,
    modular_anomaly_rhs,
    ramanujan_derive,
)
from .models import (
    ModelError,
    cusp_exchange_check,
    elliptic_periods,
    elliptic_realization,
    hol_propagators,
    lambda_lift_table,
    load_model,
    model_periods,
    tilde_s_modular_check,
)
from .picard_fuchs import FrobeniusError, to_q, yukawa_flat_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LOAD = 0, 1, 2, 3
SUITES = ("elliptic-identities", "lambda-lifts", "quintic-ring", "modular", "cusp-data")


class UsageError(Exception):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    locus: str | None = None
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "first_failure": self.locus, "detail": self.detail}


@dataclass
class RunReport:
    command: str
    model: str
    orders: dict
    checks: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    wall_time: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "model": self.model,
            "orders": self.orders,
            "checks": [c.to_json() for c in self.checks],
            "all_pass": self.ok,
            "payload": self.payload,
            "warnings": self.warnings,
        }
        if self.wall_time is not None:
            out["wall_time_s"] = round(self.wall_time, 3)
        return out


# ------------------------------------------------------------ serializers


def frac_str(c) -> str:
    if isinstance(c, RationalFunction):
        return str(c)
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def series_json(s: TruncatedSeries) -> dict:
    v = s.valuation() if not s.is_zero() else min(0, s.prec)
    return {"var": s.var, "valuation": v, "prec": s.prec, "coefficients": [frac_str(c) for c in s.coefficients(v, s.prec)]}


def ring_json(e) -> dict:
    return {e.monomial_name(m): frac_str(c) for m, c in e.canonical_terms()}


def series_rows(name: str, s: TruncatedSeries) -> list:
    d = series_json(s)
    return [(name, d["var"], d["valuation"] + i, c) for i, c in enumerate(d["coefficients"])]


def write_csv(rows: list, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["series", "variable", "exponent", "coefficient"])
    w.writerows(rows)


def _series_check(name: str, a: TruncatedSeries, b: TruncatedSeries) -> Check:
    n = a.first_difference(b)
    if n is None:
        return Check(name, True, detail=f"exact through {a.var}^{min(a.prec, b.prec) - 1}")
    return Check(name, False, f"{a.var}^{n}", f"{a[n]} != {b[n]}")


def _y_check(name: str, resid: YSeries) -> Check:
    for k in sorted(resid.terms):
        s = resid.terms[k]
        if not s.is_zero():
            n = s.valuation()
            return Check(name, False, f"Y^{k} x^{n}", f"residual coefficient {s[n]}")
    return Check(name, True, detail=f"exact modulo x^{resid.prec}")


# ------------------------------------------------------------------ pf


def cmd_pf(model: str, order: int) -> RunReport:
    m = load_model(model)
    rep = RunReport("pf", m.name, {"x": order})
    pd = model_periods(m, order)
    op = m.pf_operator
    rep.checks.append(Check("L omega0 = 0", op.apply(pd.omega0).is_zero()))
    rep.checks.append(Check("L omega1 = 0", op.apply(pd.omega1).is_zero()))
    if m.omega0_check:
        n = min(len(m.omega0_check), order + 1)
        got = pd.omega0.coefficients(0, n)
        bad = next((i for i in range(n) if got[i] != m.omega0_check[i]), None)
        rep.checks.append(Check("omega0 matches model file", bad is None, None if bad is None else f"x^{bad}"))
    back = pd.q_of_x.compose(TruncatedSeries(pd.x_of_q.coeffs, pd.x_of_q.val, pd.x_of_q.prec, "x"))
    rep.checks.append(_series_check("q(x(q)) = q", back, TruncatedSeries.monomial(1, back.prec)))
    y = yukawa_flat_check(pd, m.yukawa, order, m.yukawa_indices)
    if m.kind == "elliptic":
        rep.checks.append(_series_check("C omega0^-2 dx/dT = 1", y, TruncatedSeries.constant(1, y.prec, "q")))
    rep.payload = {
        "omega0": series_json(pd.omega0.truncate(order + 1)),
        "omega1_regular": series_json(pd.omega1.regular.truncate(order + 1)),
        "q_of_x": series_json(pd.q_of_x),
        "x_of_q": series_json(pd.x_of_q),
        "yukawa_flat": series_json(y),
    }
    return rep


# -------------------------------------------------------------- suites


def suite_elliptic(model: str, order: int) -> list:
    m = load_model(model)
    pd = elliptic_periods(m, order + 4)
    out = []
    w0q = to_q(pd, pd.omega0.truncate(order + 1))
    out.append(_series_check("omega0(x(q))^4 = E4(q)", w0q**4, eisenstein(4, order).series))
    cq = to_q(pd, (1 / m.yukawa).expand_at_zero(order + 1))
    out.append(_series_check("omega0(x(q))^12 / C(x(q)) = eta(q)^24", (w0q**12 * cq).truncate(order + 1), eta24(order).series))
    y = yukawa_flat_check(pd, m.yukawa, order, 1)
    out.append(_series_check("C omega0^-2 dx/dT = 1", y, TruncatedSeries.constant(1, y.prec, "q")))
    real = elliptic_realization(m, pd, order)
    for name, resid in real.identities().items():
        out.append(_y_check(name, resid.truncate(order + 1) if hasattr(resid, "truncate") else resid))
    return out


def suite_lambda(model: str, order: int) -> list:
    m = load_model(model)
    pd = elliptic_periods(m, order + 4)
    out = []
    for lift in lambda_lift_table(m):
        c = m.yukawa
        ok = lift.r.derivative() + c * lift.r * lift.r - 60 == c * lift.lam
        out.append(Check(f"r' + C r^2 - 60 = ({frac_str(lift.lam)}) C", ok, detail=f"r = {lift.r}"))
        mc = tilde_s_modular_check(lift, order, m, pd)
        locus = None if mc.ok else f"Y^{mc.first_difference[0]} q^{mc.first_difference[1]}"
        out.append(Check(f"S~ = -(1/12) omega0^-2 ({lift.closed_form}) [lambda = {frac_str(lift.lam)}]", mc.ok, locus))
    return out


def suite_quintic(model: str, order: int) -> list:
    m = load_model(model)
    if m.kind != "threefold":
        raise UsageError(f"suite quintic-ring needs a threefold model, got {m.kind!r}")
    pd = model_periods(m, order + 4)
    p = hol_propagators(m, pd, order)
    out = []
    for name, r in sorted(p.residuals.items()):
        n = None if r.is_zero() else r.valuation()
        out.append(Check(name, n is None, None if n is None else f"x^{n}", f"exact modulo x^{r.prec}" if n is None else f"residual {r[n]}"))
    return out


def suite_modular(model: str, order: int) -> list:
    out = []
    for k in (2, 4, 6):
        e = QuasiModularPoly.gen(f"E{k}")
        lhs = evaluate(ramanujan_derive(e), order)
        rhs = eisenstein(k, order).series.theta()
        out.append(_series_check(f"D E{k} by the Ramanujan rule = q d/dq E{k}", lhs, rhs))
    samples = ["E2star", "E2star^2 + E4", "E2star*E4 - E6", "Y*E4 + E6", "E2star^3*E6"]
    for text in samples:
        p = AlmostHolPoly.parse(text)
        ok = kz_constant_term(almost_hol_derive(p)) == ramanujan_derive(kz_constant_term(p))
        out.append(Check(f"constant term intertwines derivatives on {text}", ok))
    z01 = ZEntry(1, QuasiModularPoly.gen("E4"))
    out.append(Check("dZ_{0;1}/dE2 = 0", z01.d_dE2().P.is_zero()))
    E4 = QuasiModularPoly.gen("E4")
    rhs02 = modular_anomaly_rhs({(0, 1): z01}, 0, 2)
    out.append(Check("RHS(0,2) = E4^2/24", rhs02.P == E4 * E4 * Fraction(1, 24)))
    rhs11 = modular_anomaly_rhs({(0, 1): z01}, 1, 1)
    out.append(Check("RHS(1,1) = E4/12", rhs11.P == E4 * Fraction(1, 12)))
    return out


def suite_cusp(model: str, order: int) -> list:
    m = load_model(model)
    c = cusp_exchange_check(m)
    out = [Check(k, v) for k, v in c.relations.items()]
    out += [Check(f"denominator of {k}", v) for k, v in c.denominators.items()]
    return out


_SUITES = {
    "elliptic-identities": (suite_elliptic, "elliptic"),
    "lambda-lifts": (suite_lambda, "elliptic"),
    "quintic-ring": (suite_quintic, "quintic"),
    "modular": (suite_modular, None),
    "cusp-data": (suite_cusp, "two_cusp"),
}


def cmd_verify(model: str | None, suite: str, order: int) -> RunReport:
    if suite not in _SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    fn, default = _SUITES[suite]
    model = model or default or "-"
    rep = RunReport("verify", model, {"order": order})
    rep.payload = {"suite": suite}
    if order < 2:
        rep.warnings.append(f"order {order} is too low for the identities to be informative")
    rep.checks = fn(model, order)
    return rep


# --------------------------------------------------------------- solve


def cmd_solve(model: str, gmax: int, variant: str, emit_holomorphic: bool = False, order: int = 10) -> RunReport:
    from .anomaly import holomorphic_evaluate, solve_to_genus

    if gmax < 2:
        raise UsageError("--genus must be at least 2")
    if variant not in ("reduced", "lifted"):
        raise UsageError(f"unknown variant {variant!r}; use reduced or lifted")
    m = load_model(model)
    if m.kind != "threefold":
        raise UsageError(f"solve needs a threefold model, got kind {m.kind!r}")
    rep = RunReport("solve", m.name, {"genus": gmax, "x": order if emit_holomorphic else None})
    sols = solve_to_genus(m, gmax, variant)
    props = pd = None
    if emit_holomorphic:
        # each genus eats into the known orders through poles of C
        extra = 3 * gmax
        pd = model_periods(m, order + extra + 4)
        props = hol_propagators(m, pd, order + extra)
    genera = {}
    for s in sols:
        entry = {"weight": s.F.weight, "terms": ring_json(s.F)}
        for k, v in sorted(s.diagnostics.items()):
            if k.endswith("_ok"):
                rep.checks.append(Check(f"F^({s.genus}) {k[:-3]}", v is True))
        if emit_holomorphic:
            if variant == "reduced":
                rep.warnings.append("holomorphic limit of a reduced-ring solution omits the lift data; use --variant lifted for model-specific series")
            q = holomorphic_evaluate(s, m, pd, props, order)
            entry["holomorphic_q"] = series_json(q)
        genera[str(s.genus)] = entry
    rep.payload = {"variant": variant, "genera": genera}
    rep.warnings = sorted(set(rep.warnings))
    return rep


# ----------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bcovring", description="Exact BCOV ring computations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order_default):
        sp.add_argument("--order", type=int, default=order_default, help="truncation order")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--csv", help="also write series tables as CSV")
        sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-determinism)")

    sp = sub.add_parser("pf", help="periods, mirror map and Yukawa check")
    sp.add_argument("--model", required=True)
    common(sp, 20)
    sp = sub.add_parser("verify", help="run an identity suite")
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--model")
    common(sp, 20)
    sp = sub.add_parser("solve", help="integrate the genus recursion")
    sp.add_argument("--model", required=True)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--variant", default="reduced", choices=("reduced", "lifted"))
    sp.add_argument("--emit-holomorphic", action="store_true")
    common(sp, 10)
    return p


def _csv_rows(rep: RunReport) -> list:
    rows = []

    def walk(prefix, obj):
        if isinstance(obj, dict) and "coefficients" in obj and "valuation" in obj:
            rows.extend((prefix, obj["var"], obj["valuation"] + i, c) for i, c in enumerate(obj["coefficients"]))
        elif isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])

    walk("", rep.payload)
    return rows


def run(argv=None) -> tuple[int, str]:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), ""
    if args.order < 0:
        return EXIT_USAGE, "error: --order must be non-negative\n"
    t0 = time.perf_counter()
    try:
        if args.command == "pf":
            rep = cmd_pf(args.model, args.order)
        elif args.command == "verify":
            rep = cmd_verify(args.model, args.suite, args.order)
        else:
            rep = cmd_solve(args.model, args.genus, args.variant, args.emit_holomorphic, args.order)
    except UsageError as exc:
        return EXIT_USAGE, f"error: {exc}\n"
    except (ModelError, FrobeniusError) as exc:
        return EXIT_LOAD, f"error: {exc}\n"
    except ValueError as exc:
        return EXIT_FAIL, f"error: {exc}\n"
    if args.timing:
        rep.wall_time = time.perf_counter() - t0
    text = json.dumps(rep.to_json(), sort_keys=True, indent=2) + "\n"
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            write_csv(_csv_rows(rep), fh)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        text = ""
    return (EXIT_OK if rep.ok else EXIT_FAIL), text


def main(argv=None) -> int:
    code, text = run(argv)
    if text:
        (sys.stdout if code in (EXIT_OK, EXIT_FAIL) else sys.stderr).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
