"""Per-dot photophysics: Purcell-enhanced decay rates and exciton/biexciton filling.

Rates and pump are expressed in units of the bulk exciton rate Γ0. Every function
accepts scalars or numpy arrays, so a whole :class:`DotEnsemble` can be pushed
through at once.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Protocol

import numpy as np

from ..exceptions import DomainError, IntegrationError
from ..logging import get_logger
from .cavity import CavityMode, lorentzian


OCCUPANCY_TOLERANCE = 1e-6

logger = get_logger(__name__)


class BiexcitonEnhancement(StrEnum):
    """Energy at which the biexciton decay is Purcell-enhanced."""

    BIEXCITON = "biexciton"
    EXCITON = "exciton"


class DotLike(Protocol):
    e_x: Any
    e_bind: Any
    u: Any


def _out(value: np.ndarray) -> np.ndarray | float:
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True, slots=True)
class TransitionRates:
    """Total decay rates (units of Γ0) and fractions emitted into the mode."""

    gamma_x: np.ndarray | float
    gamma_xx: np.ndarray | float
    beta_x: np.ndarray | float
    beta_xx: np.ndarray | float


@dataclass(frozen=True, slots=True)
class SteadyState:
    """Occupancies and photon emission rates of a continuously pumped dot."""

    g: np.ndarray | float
    x: np.ndarray | float
    x2: np.ndarray | float
    i_x: np.ndarray | float
    i_xx: np.ndarray | float

    @property
    def total(self) -> np.ndarray | float:
        return self.i_x + self.i_xx


@dataclass(frozen=True, slots=True)
class RateTrajectory:
    """Occupancies sampled along a time integration from the empty dot."""

    t: np.ndarray
    g: np.ndarray
    x: np.ndarray
    x2: np.ndarray

    @property
    def final(self) -> tuple[float, float, float]:
        return float(self.g[-1]), float(self.x[-1]), float(self.x2[-1])


def transition_rates(
    dot: DotLike,
    mode: CavityMode,
    *,
    biexciton_enhancement: BiexcitonEnhancement = BiexcitonEnhancement.BIEXCITON,
) -> TransitionRates:
    """Purcell-enhanced exciton and biexciton rates of ``dot`` (or of every dot).

    In bulk the biexciton decays at twice the exciton rate; in the pillar each of
    its two recombination paths gets the mode enhancement at the emission energy.
    """

    fp = mode.effective_fp
    gamma = mode.gamma_leak
    e_x = np.asarray(dot.e_x, dtype=float)
    u = np.asarray(dot.u, dtype=float)
    if np.any(u < 0) or np.any(u > 1):
        raise DomainError("Field intensity u must lie in [0, 1]")

    if BiexcitonEnhancement(biexciton_enhancement) is BiexcitonEnhancement.EXCITON:
        e_xx = e_x
    else:
        e_xx = e_x - np.asarray(dot.e_bind, dtype=float)

    mode_x = fp * np.asarray(lorentzian(e_x, mode)) * u
    mode_xx = fp * np.asarray(lorentzian(e_xx, mode)) * u

    gamma_x = mode_x + gamma
    gamma_xx = 2.0 * (mode_xx + gamma)
    return TransitionRates(
        gamma_x=_out(gamma_x),
        gamma_xx=_out(gamma_xx),
        beta_x=_out(mode_x / gamma_x),
        beta_xx=_out(mode_xx / (mode_xx + gamma)),
    )


def steady_state(p: float, rates: TransitionRates) -> SteadyState:
    """Closed-form stationary solution of the three-level rate equations."""

    if p < 0:
        raise DomainError(f"Pump rate must be >= 0, got {p!r}")
    gamma_x = np.asarray(rates.gamma_x, dtype=float)
    gamma_xx = np.asarray(rates.gamma_xx, dtype=float)

    single = p / gamma_x
    double = p * p / (gamma_x * gamma_xx)
    denominator = 1.0 + single + double
    g = 1.0 / denominator
    x = single / denominator
    x2 = double / denominator
    return SteadyState(
        g=_out(g),
        x=_out(x),
        x2=_out(x2),
        i_x=_out(p * g),
        i_xx=_out(p * x),
    )


def _generator(p: float, gamma_x: float, gamma_xx: float) -> np.ndarray:
    return np.array(
        [
            [-p, gamma_x, 0.0],
            [p, -p - gamma_x, gamma_xx],
            [0.0, p, -gamma_xx],
        ]
    )


def relaxation_rate(p: float, rates: TransitionRates) -> float:
    """Slowest non-zero decay rate of the rate equations towards steady state."""

    gamma_x = float(rates.gamma_x)
    gamma_xx = float(rates.gamma_xx)
    trace = 2.0 * p + gamma_x + gamma_xx
    det = p * p + p * gamma_xx + gamma_x * gamma_xx
    discriminant = (gamma_x - gamma_xx) ** 2 + 4.0 * p * gamma_x
    return 2.0 * det / (trace + math.sqrt(discriminant))


def rk4_step(
    f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float
) -> np.ndarray:
    """One classical fourth-order Runge–Kutta step."""

    k1 = f(t, y)
    k2 = f(t + h / 2.0, y + h / 2.0 * k1)
    k3 = f(t + h / 2.0, y + h / 2.0 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_rate_eqs(
    p: float,
    rates: TransitionRates,
    t_end: float,
    dt: float,
    *,
    samples: int = 201,
) -> RateTrajectory:
    """Integrate the rate equations from the empty dot with a fixed RK4 step.

    The step is adjusted down so that a whole number of steps reaches ``t_end``.
    Raises :class:`IntegrationError` as soon as an occupancy leaves
    [-1e-6, 1 + 1e-6].
    """

    if p < 0:
        raise DomainError(f"Pump rate must be >= 0, got {p!r}")
    if not dt > 0 or not t_end > 0:
        raise DomainError("dt and t_end must be > 0")
    if np.ndim(rates.gamma_x) != 0:
        raise DomainError("integrate_rate_eqs works on the rates of a single dot")

    generator = _generator(p, float(rates.gamma_x), float(rates.gamma_xx))
    if t_end * relaxation_rate(p, rates) < 10.0 and p > 0:
        logger.warning(
            "dynamics.integrate.short_run",
            t_end=t_end,
            relaxation_time=1.0 / relaxation_rate(p, rates),
        )

    steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    h = t_end / steps
    keep = np.unique(np.linspace(0, steps, max(2, samples)).round().astype(int))

    def derivative(_t: float, y: np.ndarray) -> np.ndarray:
        return generator @ y

    state = np.array([1.0, 0.0, 0.0])
    recorded = np.empty((keep.size, 3))
    recorded[0] = state
    slot = 1
    for step in range(1, steps + 1):
        state = rk4_step(derivative, (step - 1) * h, state, h)
        if state.min() < -OCCUPANCY_TOLERANCE or state.max() > 1.0 + OCCUPANCY_TOLERANCE:
            raise IntegrationError(
                f"Occupancy left [0, 1] at t = {step * h:g} (step {step}, h = {h:g}); "
                "reduce dt"
            )
        if slot < keep.size and keep[slot] == step:
            recorded[slot] = state
            slot += 1

    times = keep * h
    return RateTrajectory(
        t=times, g=recorded[:, 0], x=recorded[:, 1], x2=recorded[:, 2]
    )


__all__ = [
    "BiexcitonEnhancement",
    "RateTrajectory",
    "SteadyState",
    "TransitionRates",
    "integrate_rate_eqs",
    "relaxation_rate",
    "rk4_step",
    "steady_state",
    "transition_rates",
]
