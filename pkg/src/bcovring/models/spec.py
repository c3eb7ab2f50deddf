"""Model files: schema, parsing and load-time self checks.

A model file is YAML.  Rational functions are strings in the model variable
(integers, ``+ - * / ^``, parentheses); lift expressions may also use ``C``
(the Yukawa coupling), ``Cp`` (its derivative) and any names under ``aux``.
See the README for the full field list.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import yaml

from ..exact import RationalFunction, parse_ratfunc
from ..picard_fuchs import FrobeniusError, PFOperator, frobenius_solve
from ..ring import LiftData

__all__ = ["ModelSpec", "ModelError", "load_model", "model_path", "available_models", "LambdaSpec"]

DATA_DIR = Path(__file__).with_name("data")
KINDS = ("elliptic", "threefold", "cusp-data")
_REQUIRED = {
    "elliptic": ("pf_operator", "yukawa"),
    "threefold": ("pf_operator", "yukawa", "chi"),
    "cusp-data": ("lift",),
}
_LIFT_KEYS = ("f", "h", "E_xx", "E_x", "E", "kappa", "kappa_times_yukawa")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaSpec:
    lam: Fraction
    r: RationalFunction
    closed_form: str


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str
    var: str = "x"
    r: int = 1
    pf_operator: PFOperator | None = None
    yukawa: RationalFunction | None = None
    chi: int | None = None
    lift: dict = field(default_factory=dict)
    ambiguities: dict = field(default_factory=dict)
    f0: RationalFunction | None = None
    q_scale: Fraction = Fraction(1)
    omega0_check: tuple = ()
    lambda_lifts: tuple = ()
    aux: dict = field(default_factory=dict)
    expected_denominators: dict = field(default_factory=dict)
    cusp_map: RationalFunction | None = None
    basis: str = ""
    source: str = ""

    @property
    def yukawa_indices(self) -> int:
        return 1 if self.kind == "elliptic" else 3

    def lift_data(self) -> LiftData:
        """Lift data for the one-modulus lifted ring."""
        need = ("f", "h", "E_xx", "E_x", "E", "kappa")
        missing = [k for k in need if k not in self.lift]
        if self.yukawa is None or missing:
            raise ModelError(f"model {self.name!r} lacks lift data: {', '.join(missing) or 'yukawa'}")
        L = self.lift
        return LiftData(C=self.yukawa, f=L["f"], h=L["h"], Exx=L["E_xx"], Ex=L["E_x"], E=L["E"], kappa=L["kappa"])

    def ambiguity(self, g: int) -> RationalFunction:
        return self.ambiguities.get(g, RationalFunction.from_value(0, self.var))


def available_models() -> list[str]:
    return sorted(p.stem for p in DATA_DIR.glob("*.yaml"))


def model_path(name_or_path: str | os.PathLike) -> Path:
    p = Path(name_or_path)
    if p.suffix in (".yaml", ".yml") or p.exists():
        if not p.exists():
            raise ModelError(f"model file {str(p)!r} not found")
        return p
    cand = DATA_DIR / f"{name_or_path}.yaml"
    if not cand.exists():
        raise ModelError(f"unknown model {str(name_or_path)!r}; shipped models: {', '.join(available_models())}")
    return cand


def _rf(text, var, names, what):
    if isinstance(text, (int, Fraction)):
        return RationalFunction.from_value(text, var)
    if not isinstance(text, str):
        raise ModelError(f"{what}: expected an expression string, got {type(text).__name__}")
    try:
        return parse_ratfunc(text, var, names)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"{what}: {exc}") from None


def _frac(v, what) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise ModelError(f"{what}: not a rational number: {v!r}") from None


def load_model(name_or_path, check: bool = True) -> ModelSpec:
    """Load and validate a model by shipped name or file path."""
    path = model_path(name_or_path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ModelError(f"{path}: YAML parse error: {exc}") from None
    if not isinstance(raw, dict):
        raise ModelError(f"{path}: top level must be a mapping")
    return build_model(raw, source=str(path), check=check)


def build_model(raw: dict, source: str = "<dict>", check: bool = True) -> ModelSpec:
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ModelError(f"{source}: 'kind' must be one of {KINDS}, got {kind!r}")
    missing = [k for k in _REQUIRED[kind] if k not in raw]
    if missing:
        raise ModelError(f"{source}: schema error, missing required field(s) {missing} for kind {kind!r}")
    name = str(raw.get("name", Path(source).stem))
    var = str(raw.get("variable", "x"))
    if int(raw.get("r", 1)) != 1:
        raise ModelError(f"{source}: only one-modulus models (r = 1) are supported")

    names: dict = {}
    aux = {}
    for k, v in (raw.get("aux") or {}).items():
        aux[k] = _rf(v, var, names, f"aux.{k}")
        names[k] = aux[k]

    pf = None
    if "pf_operator" in raw:
        op = raw["pf_operator"]
        try:
            pf = PFOperator.parse_expression(op, var) if isinstance(op, str) else PFOperator.parse(op)
        except (FrobeniusError, ValueError) as exc:
            raise ModelError(f"{source}: pf_operator: {exc}") from None

    yukawa = None
    if "yukawa" in raw:
        yukawa = _rf(raw["yukawa"], var, names, "yukawa")
        if yukawa.is_zero():
            raise ModelError(f"{source}: yukawa is identically zero")
        names["C"] = yukawa
        names["Cp"] = yukawa.derivative()

    chi = None
    if "chi" in raw:
        if not isinstance(raw["chi"], int):
            raise ModelError(f"{source}: chi must be an integer")
        chi = raw["chi"]

    lift = {}
    for k, v in (raw.get("lift") or {}).items():
        if k not in _LIFT_KEYS:
            raise ModelError(f"{source}: unknown lift field {k!r}")
        lift[k] = _rf(v, var, names, f"lift.{k}")
    if kind == "threefold" and "kappa" in lift and "kappa_times_yukawa" not in lift:
        lift["kappa_times_yukawa"] = lift["kappa"] * yukawa

    amb = {}
    for g, v in (raw.get("ambiguities") or {}).items():
        amb[int(g)] = _rf(v, var, names, f"ambiguities.{g}")

    lambdas = []
    for i, ent in enumerate(raw.get("lambda_lifts") or []):
        try:
            lambdas.append(LambdaSpec(_frac(ent["lambda"], f"lambda_lifts[{i}]"), _rf(ent["r"], var, names, f"lambda_lifts[{i}].r"), str(ent.get("closed_form", ""))))
        except KeyError as exc:
            raise ModelError(f"{source}: lambda_lifts[{i}] lacks {exc}") from None

    dens = {k: _rf(v, var, names, f"expected_denominators.{k}") for k, v in (raw.get("expected_denominators") or {}).items()}

    spec = ModelSpec(
        name=name,
        kind=kind,
        var=var,
        pf_operator=pf,
        yukawa=yukawa,
        chi=chi,
        lift=lift,
        ambiguities=amb,
        f0=_rf(raw["f0"], var, names, "f0") if "f0" in raw else None,
        q_scale=_frac(raw.get("q_scale", 1), "q_scale"),
        omega0_check=tuple(_frac(c, "omega0_check") for c in raw.get("omega0_check") or ()),
        lambda_lifts=tuple(lambdas),
        aux=aux,
        expected_denominators=dens,
        cusp_map=_rf(raw["cusp_map"], var, names, "cusp_map") if "cusp_map" in raw else None,
        basis=str(raw.get("basis", "")),
        source=source,
    )
    if check:
        for problem in self_check(spec):
            raise ModelError(f"{source}: consistency failure: {problem}")
    return spec


def self_check(m: ModelSpec) -> list[str]:
    """Load-time checks; returns the list of violated statements."""
    problems = []
    if m.pf_operator is not None and m.omega0_check:
        try:
            pd = frobenius_solve(m.pf_operator, len(m.omega0_check) - 1)
        except FrobeniusError as exc:
            return [f"pf_operator: {exc}"]
        got = pd.omega0.coefficients(0, len(m.omega0_check))
        if list(got) != list(m.omega0_check):
            problems.append(f"omega0 from pf_operator is {[str(c) for c in got]}, file says {[str(c) for c in m.omega0_check]}")
    L = m.lift
    if "h" in L and "kappa_times_yukawa" in L:
        # D K in the lifted ring against its holomorphic-limit equation
        if L["kappa_times_yukawa"] != L["h"]:
            problems.append(f"C*kappa = {L['kappa_times_yukawa']} differs from h~ = {L['h']}")
    for key, den in m.expected_denominators.items():
        val = L.get(key)
        if val is None:
            problems.append(f"expected_denominators names missing lift field {key!r}")
            continue
        if val.den != den.num * (1 / den.num.coeffs[-1]) or not den.den.is_constant():
            problems.append(f"lift.{key} has denominator {val.den}, expected {den}")
    return problems
