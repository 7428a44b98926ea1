"""Cavity mode description: Lorentzian density of states, Purcell factor, field profile."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..exceptions import DomainError


HC_MEV_NM = 1239841.984
"""Planck constant times speed of light, in meV·nm."""

BESSEL_J0_ZERO = float(special.jn_zeros(0, 1)[0])
"""First zero of J0 (≈ 2.405), pinned to the pillar sidewall."""

DEFAULT_E0_MEV = 1300.0


class FieldProfile(StrEnum):
    """Transverse intensity profile of the fundamental mode."""

    BESSEL_TRUNCATED = "bessel_truncated"
    GAUSSIAN = "gaussian"
    UNIFORM = "uniform"
    POINT_DOT = "point_dot"


class BroadEmitterRule(StrEnum):
    """How the emitter quality factor enters the Purcell magnitude."""

    SUBSTITUTION = "substitution"
    HARMONIC = "harmonic"


@dataclass(frozen=True, slots=True)
class PurcellInputs:
    """Quantities entering the Purcell formula."""

    q: float
    v_eff: float
    """Effective mode volume in µm³."""
    lambda_vac: float
    """Vacuum wavelength in nm."""
    n_index: float

    def __post_init__(self) -> None:
        for name in ("q", "v_eff", "lambda_vac", "n_index"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"PurcellInputs.{name} must be > 0, got {value!r}")


@dataclass(frozen=True, slots=True)
class CavityMode:
    """Fundamental micropillar mode seen by the dots.

    ``emitter_linewidth`` switches on the broad-emitter regime: when it is larger
    than the mode linewidth the Purcell magnitude is computed with the emitter
    quality factor instead of the cavity one (see :attr:`effective_fp`). With
    ``broad_emitter=harmonic`` the two combine as 1/Q_eff = 1/Q_cav + 1/Q_em.
    """

    e0: float = DEFAULT_E0_MEV
    q: float = 15000.0
    fp: float = 189.0
    gamma_leak: float = 1.0
    radius: float = 0.5
    profile: FieldProfile = FieldProfile.BESSEL_TRUNCATED
    emitter_linewidth: float = 0.0
    broad_emitter: BroadEmitterRule = BroadEmitterRule.SUBSTITUTION
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.e0 > 0:
            raise DomainError(f"Mode energy e0 must be > 0 meV, got {self.e0!r}")
        if not self.q > 0:
            raise DomainError(f"Quality factor must be > 0, got {self.q!r}")
        if not self.fp >= 0:
            raise DomainError(f"Purcell factor must be >= 0, got {self.fp!r}")
        if not 0 < self.gamma_leak <= 1:
            raise DomainError(
                f"Leaky-mode factor gamma must lie in (0, 1], got {self.gamma_leak!r}"
            )
        if not self.radius > 0:
            raise DomainError(f"Pillar radius must be > 0 µm, got {self.radius!r}")
        if not self.emitter_linewidth >= 0:
            raise DomainError(
                f"Emitter linewidth must be >= 0 meV, got {self.emitter_linewidth!r}"
            )
        object.__setattr__(self, "profile", FieldProfile(self.profile))
        object.__setattr__(self, "broad_emitter", BroadEmitterRule(self.broad_emitter))

    @classmethod
    def from_purcell_inputs(
        cls, inputs: PurcellInputs, *, e0: float | None = None, **kwargs: Any
    ) -> "CavityMode":
        """Build a mode whose Purcell factor is computed from (Q, V, λ, n)."""

        energy = e0 if e0 is not None else energy_mev(inputs.lambda_vac)
        return cls(e0=energy, q=inputs.q, fp=purcell_factor(inputs), **kwargs)

    @property
    def fwhm(self) -> float:
        """Mode linewidth E0/Q in meV."""

        return self.e0 / self.q

    @property
    def emitter_q(self) -> float | None:
        if self.emitter_linewidth <= 0:
            return None
        return self.e0 / self.emitter_linewidth

    @property
    def effective_fp(self) -> float:
        """Purcell magnitude felt by the dots, reduced for broad emitters."""

        q_em = self.emitter_q
        if q_em is None:
            return self.fp
        q_eff = effective_q_broad_emitter(self.q, q_em, self.broad_emitter)
        return self.fp * q_eff / self.q

    def with_(self, **changes: Any) -> "CavityMode":
        return replace(self, **changes)

    def describe(self) -> dict[str, Any]:
        return {
            "e0_meV": self.e0,
            "q": self.q,
            "fp": self.fp,
            "gamma_leak": self.gamma_leak,
            "radius_um": self.radius,
            "profile": self.profile.value,
            "emitter_linewidth_meV": self.emitter_linewidth,
            "broad_emitter": self.broad_emitter.value,
        }


def purcell_factor(inputs: PurcellInputs) -> float:
    """Return F_p = 3/(4π²) · Q · (λ/n)³ / V with λ in nm and V in µm³."""

    wavelength_um = inputs.lambda_vac / 1000.0
    return (
        3.0
        / (4.0 * math.pi**2)
        * inputs.q
        * (wavelength_um / inputs.n_index) ** 3
        / inputs.v_eff
    )


def mode_volume_for(fp: float, q: float, lambda_vac: float, n_index: float) -> float:
    """Invert the Purcell formula: effective volume (µm³) giving ``fp`` at ``q``."""

    if not (fp > 0 and q > 0 and lambda_vac > 0 and n_index > 0):
        raise DomainError("fp, q, lambda_vac and n_index must all be > 0")
    wavelength_um = lambda_vac / 1000.0
    return 3.0 / (4.0 * math.pi**2) * q * (wavelength_um / n_index) ** 3 / fp


def lorentzian(e: ArrayLike, mode: CavityMode) -> np.ndarray | float:
    """Normalised mode spectral density L(E) = E0² / (4Q²(E−E0)² + E0²)."""

    energy = np.asarray(e, dtype=float)
    e0_sq = mode.e0 * mode.e0
    value = e0_sq / (4.0 * mode.q * mode.q * (energy - mode.e0) ** 2 + e0_sq)
    return float(value) if value.ndim == 0 else value


def field_intensity(r: ArrayLike, mode: CavityMode) -> np.ndarray | float:
    """Normalised in-plane intensity |E_xy(r)|² at distance ``r`` (µm) from the axis."""

    radius = np.asarray(r, dtype=float)
    if np.any(radius < 0) or np.any(radius > mode.radius):
        raise DomainError(
            f"r must lie in [0, {mode.radius}] µm for a pillar of radius {mode.radius}"
        )

    profile = mode.profile
    if profile is FieldProfile.POINT_DOT:
        if np.any(radius != 0):
            raise DomainError("The point-dot profile only defines r = 0")
        value = np.ones_like(radius)
    elif profile is FieldProfile.UNIFORM:
        value = np.ones_like(radius)
    elif profile is FieldProfile.GAUSSIAN:
        waist = mode.radius / math.sqrt(2.0)
        value = np.exp(-2.0 * radius**2 / waist**2)
    else:
        value = special.j0(BESSEL_J0_ZERO * radius / mode.radius) ** 2
    return float(value) if value.ndim == 0 else value


def effective_q_broad_emitter(
    q_cav: float,
    q_em: float,
    rule: BroadEmitterRule = BroadEmitterRule.SUBSTITUTION,
) -> float:
    """Quality factor governing the Purcell magnitude for an emitter of width E/q_em.

    ``substitution`` takes the narrower of the two resonances; ``harmonic`` adds
    the linewidths.
    """

    if not (q_cav > 0 and q_em > 0):
        raise DomainError(
            f"Quality factors must be > 0, got q_cav={q_cav!r}, q_em={q_em!r}"
        )
    if BroadEmitterRule(rule) is BroadEmitterRule.HARMONIC:
        return 1.0 / (1.0 / q_cav + 1.0 / q_em)
    return min(q_cav, q_em)


def broadening_factor(fp: float, gamma_leak: float = 1.0) -> float:
    """Low-power linewidth broadening √((F_p + γ)/γ) of an on-axis dot array."""

    if fp < 0 or gamma_leak <= 0:
        raise DomainError("fp must be >= 0 and gamma_leak > 0")
    return math.sqrt((fp + gamma_leak) / gamma_leak)


def energy_mev(lambda_nm: float) -> float:
    if lambda_nm <= 0:
        raise DomainError("Wavelength must be > 0 nm")
    return HC_MEV_NM / lambda_nm


def wavelength_nm(e_mev: float) -> float:
    if e_mev <= 0:
        raise DomainError("Energy must be > 0 meV")
    return HC_MEV_NM / e_mev


__all__ = [
    "BESSEL_J0_ZERO",
    "BroadEmitterRule",
    "CavityMode",
    "DEFAULT_E0_MEV",
    "FieldProfile",
    "HC_MEV_NM",
    "PurcellInputs",
    "broadening_factor",
    "effective_q_broad_emitter",
    "energy_mev",
    "field_intensity",
    "lorentzian",
    "mode_volume_for",
    "purcell_factor",
    "wavelength_nm",
]
