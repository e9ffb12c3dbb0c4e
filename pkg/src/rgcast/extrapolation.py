"""Self-similar renormalization-group extrapolation of a fitted history.

The forecast treats successive interpolation orders as steps of an RG flow
and evaluates the flow at its fixed point. For a fit a_0..a_k and a horizon
t in (0, 1] it is the nested exponential

    f*(t) = f0 * exp(c_1 t * exp(c_2 t * ... * exp(c_k t)))

driven, order by order, by

    velocity        v_n = (a_n / f0) * t^n
    effective time  tau_n = 1 / (n * (1 + v_n^2))
    controller      c_n = (a_n / a_{n-1}) * tau_n

The effective time is the closed-form minimizer of the time-distance cost
functional sum_n ((tau_n - 1/n)^2 + (v_n tau_n)^2), so tau_n <= 1/n always:
the flow reaches its fixed point faster than the real time separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .interpolation import PolynomialFit

# Largest exponent magnitude fed to exp(); beyond this a double overflows.
EXP_GUARD = 700.0

STATUS_OK = "ok"
STATUS_DIVERGED = "diverged"


class ZeroCoefficientError(ValueError):
    """An interior coefficient is exactly zero, so a controller ratio is undefined."""


@dataclass(frozen=True)
class ForecastDiagnostics:
    """Per-order velocities v_n, effective times tau_n, and controllers c_n."""

    velocities: tuple[float, ...]
    effective_times: tuple[float, ...]
    controllers: tuple[float, ...]


@dataclass(frozen=True)
class Forecast:
    value: float
    horizon: float
    diagnostics: ForecastDiagnostics
    status: str

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


def effective_time(n: int, v: float) -> float:
    """Closed-form cost-functional minimizer 1 / (n * (1 + v^2))."""
    if n < 1:
        raise ValueError(f"order n must be >= 1, got {n}")
    return 1.0 / (n * (1.0 + v * v))


def cost_functional(taus: list[float], velocities: list[float]) -> float:
    """Time-distance cost sum_n ((tau_n - 1/n)^2 + (v_n tau_n)^2).

    Kept as an independent check that effective_time minimizes each term;
    the forecast path never evaluates it.
    """
    if len(taus) != len(velocities):
        raise ValueError(f"length mismatch: {len(taus)} taus vs {len(velocities)} velocities")
    if not taus:
        raise ValueError("cost functional needs at least one order")
    return math.fsum(
        (tau - 1.0 / n) ** 2 + (v * tau) ** 2
        for n, (tau, v) in enumerate(zip(taus, velocities), start=1)
    )


def forecast(fit: PolynomialFit, t: float) -> Forecast:
    """Extrapolate one fitted history to horizon t in (0, 1].

    A constant history (all higher coefficients exactly zero) forecasts f0
    with zero diagnostics. A zero interior coefficient below order k leaves
    the next controller undefined and raises ZeroCoefficientError; callers
    drop that scenario. If any nested exponent leaves double range the
    forecast is flagged diverged instead of overflowing.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"horizon must lie in (0, 1], got {t}")
    a = fit.coefficients
    f0 = a[0]
    if not f0 > 0.0:
        raise ValueError(f"anchor value must be positive, got {f0}")
    k = fit.order

    zeros = ForecastDiagnostics((0.0,) * k, (0.0,) * k, (0.0,) * k)
    if all(a[n] == 0.0 for n in range(1, k + 1)):
        return Forecast(value=f0, horizon=t, diagnostics=zeros, status=STATUS_OK)
    for n in range(1, k):
        if a[n] == 0.0:
            raise ZeroCoefficientError(
                f"coefficient a_{n} = 0 with order {k}: ratio a_{n + 1}/a_{n} undefined"
            )

    velocities = tuple((a[n] / f0) * t**n for n in range(1, k + 1))
    taus = tuple(effective_time(n, v) for n, v in enumerate(velocities, start=1))
    controllers = tuple(
        (a[n] / a[n - 1]) * taus[n - 1] for n in range(1, k + 1)
    )
    diagnostics = ForecastDiagnostics(velocities, taus, controllers)

    def diverged() -> Forecast:
        return Forecast(value=math.nan, horizon=t, diagnostics=diagnostics, status=STATUS_DIVERGED)

    # Innermost exponential first: g <- c_k t, then g <- c_n t exp(g).
    g = controllers[k - 1] * t
    for n in range(k - 1, 0, -1):
        if abs(g) > EXP_GUARD:
            return diverged()
        g = controllers[n - 1] * t * math.exp(g)
    if abs(g) > EXP_GUARD:
        return diverged()
    value = f0 * math.exp(g)
    if not (0.0 < value < math.inf):
        return diverged()
    return Forecast(value=value, horizon=t, diagnostics=diagnostics, status=STATUS_OK)
