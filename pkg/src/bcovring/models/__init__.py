"""Model registry, the elliptic realization and holomorphic-limit data."""

from .elliptic import (
    EllipticRealization,
    LambdaLift,
    LiftRejected,
    ModularCheck,
    elliptic_periods,
    elliptic_realization,
    holomorphic_limit_commutes,
    lambda_lift_table,
    tilde_s_modular_check,
    validate_lift,
)
from .holomorphic import CuspCheck, HolPropagators, cusp_exchange_check, hol_propagators, model_periods, threefold_system_residuals
from .spec import LambdaSpec, ModelError, ModelSpec, available_models, build_model, load_model, model_path

__all__ = [
    "EllipticRealization",
    "LambdaLift",
    "LiftRejected",
    "ModularCheck",
    "elliptic_periods",
    "elliptic_realization",
    "holomorphic_limit_commutes",
    "lambda_lift_table",
    "tilde_s_modular_check",
    "validate_lift",
    "CuspCheck",
    "HolPropagators",
    "cusp_exchange_check",
    "hol_propagators",
    "model_periods",
    "threefold_system_residuals",
    "LambdaSpec",
    "ModelError",
    "ModelSpec",
    "available_models",
    "build_model",
    "load_model",
    "model_path",
]
