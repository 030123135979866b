"""Closed-form baselines: continuum (mean-field) and master-equation results."""

from __future__ import annotations

import math
from dataclasses import dataclass

from degchain.errors import NonPositive, Unsupported
from degchain.kernel import Family, GrowthModel


@dataclass(frozen=True)
class AnalyticPrediction:
    """Degree exponent ``gamma``, coefficient amplitude ``c`` (the finite-time
    coefficient is ``c * t**z``), non-stationary exponent ``z`` and dynamic
    exponent ``beta``."""

    gamma: float
    c: float
    z: float
    beta: float

    def coefficient_at(self, t: float) -> float:
        return self.c * t**self.z


def mean_field_pk(m: int, k: float) -> float:
    """Continuum-theory tail ``2 m**2 / k**3`` of the BA degree distribution."""
    if not k >= m >= 1:
        raise ValueError(f"need k >= m >= 1, got m={m}, k={k}")
    return 2.0 * m * m / k**3


def master_equation_pk(m: int, k: float) -> float:
    """Stationary BA degree distribution ``2m(m+1) / (k(k+1)(k+2))``."""
    if not k >= m >= 1:
        raise ValueError(f"need k >= m >= 1, got m={m}, k={k}")
    return 2.0 * m * (m + 1) / (k * (k + 1.0) * (k + 2.0))


def power_model_prediction(m: int, theta: float) -> AnalyticPrediction:
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    one_minus = 1.0 - theta
    return AnalyticPrediction(
        gamma=(3.0 - theta) / one_minus,
        c=(2.0 / one_minus) * m ** (2.0 / one_minus),
        z=2.0 * theta / one_minus,
        beta=one_minus / 2.0,
    )


def ba_prediction(m: int) -> AnalyticPrediction:
    return power_model_prediction(m, 0.0)


def total_degree(model: GrowthModel, t: float) -> float:
    """Approximate sum of all degrees after ``t`` steps."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if model.family is Family.CONSTANT:
        return 2.0 * model.m * t
    if model.family is Family.POWER:
        return 2.0 * model.m / (model.theta + 1.0) * t ** (model.theta + 1.0)
    value = 2.0 * model.m * t * (math.log(t) - 1.0)
    if value <= 0.0:
        raise NonPositive(f"total degree of the logarithmic model is non-positive at t={t}")
    return value


def continuum_trajectory(model: GrowthModel, i: float, t: float) -> float:
    """Mean-field degree at time ``t`` of the node that joined at ``i``."""
    if not 1 <= i <= t:
        raise ValueError(f"need 1 <= i <= t, got i={i}, t={t}")
    if model.family is Family.CONSTANT:
        return model.m * math.sqrt(t / i)
    if model.family is Family.POWER:
        theta = model.theta
        return model.m * t**theta * (t / i) ** ((1.0 - theta) / 2.0)
    raise Unsupported("no closed-form trajectory exists for the logarithmic model")
