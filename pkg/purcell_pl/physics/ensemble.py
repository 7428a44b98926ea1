"""Quantum-dot population: Monte-Carlo samples, quadrature grids and smoothness checks."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, fields, replace
from enum import StrEnum
from typing import Any, overload

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy import special, stats

from ..exceptions import ConfigError
from ..logging import get_logger
from .cavity import CavityMode, FieldProfile, field_intensity


FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
"""Ratio FWHM/σ of a Gaussian (≈ 2.3548)."""

MIN_WINDOW_IN_MODE_WIDTHS = 20.0
SMOOTHNESS_MIN_LINES = 10.0
SMOOTHNESS_HALF_SPAN = 3.0
"""Half-width, in mode FWHMs, of the neighbourhood inspected by ``smoothness_check``."""

logger = get_logger(__name__)


class EnsembleMode(StrEnum):
    MONTE_CARLO = "monte_carlo"
    QUADRATURE = "quadrature"


class InhomogeneousShape(StrEnum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True, slots=True)
class EnsembleConfig:
    """How the dot population is drawn.

    ``n_dots`` is the number of samples in Monte-Carlo mode and the total dot count
    carried by the quadrature weights otherwise. ``energy_order=None`` lets the
    quadrature pick one exciton node per default spectral bin (see
    :func:`default_energy_order`).
    """

    mode: EnsembleMode = EnsembleMode.QUADRATURE
    n_dots: int = 100_000
    window: float = 20.0
    center: float | None = None
    binding_mean: float = 3.0
    binding_fwhm: float = 0.6
    seed: int = 0
    radial_order: int = 24
    energy_order: int | None = None
    binding_order: int = 5
    inhomogeneous: InhomogeneousShape = InhomogeneousShape.UNIFORM
    inhomogeneous_fwhm: float = 20.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", EnsembleMode(self.mode))
        object.__setattr__(
            self, "inhomogeneous", InhomogeneousShape(self.inhomogeneous)
        )

    def validate(self, mode: CavityMode) -> None:
        """Raise :class:`ConfigError` unless the configuration suits ``mode``."""

        errors: list[str] = []
        if self.n_dots < 1:
            errors.append(f"n_dots must be >= 1, got {self.n_dots}")
        if not self.window > 0:
            errors.append(f"window must be > 0 meV, got {self.window}")
        elif self.window < MIN_WINDOW_IN_MODE_WIDTHS * mode.fwhm:
            errors.append(
                f"window of {self.window} meV is narrower than "
                f"{MIN_WINDOW_IN_MODE_WIDTHS:g} mode linewidths "
                f"({MIN_WINDOW_IN_MODE_WIDTHS * mode.fwhm:.4g} meV)"
            )
        if self.binding_fwhm < 0:
            errors.append(f"binding_fwhm must be >= 0, got {self.binding_fwhm}")
        if self.radial_order < 1:
            errors.append(f"radial_order must be >= 1, got {self.radial_order}")
        if self.energy_order is not None and self.energy_order < 1:
            errors.append(f"energy_order must be >= 1, got {self.energy_order}")
        if self.binding_order < 1:
            errors.append(f"binding_order must be >= 1, got {self.binding_order}")
        if (
            self.inhomogeneous is InhomogeneousShape.GAUSSIAN
            and not self.inhomogeneous_fwhm > 0
        ):
            errors.append("inhomogeneous_fwhm must be > 0 for a gaussian distribution")
        if errors:
            raise ConfigError("Invalid ensemble configuration: " + "; ".join(errors))

    def window_bounds(self, mode: CavityMode) -> tuple[float, float]:
        centre = mode.e0 if self.center is None else self.center
        return centre - self.window / 2.0, centre + self.window / 2.0

    @property
    def binding_sigma(self) -> float:
        return self.binding_fwhm / FWHM_TO_SIGMA

    def with_(self, **changes: Any) -> "EnsembleConfig":
        return replace(self, **changes)


@dataclass(frozen=True, slots=True)
class QuantumDot:
    """A single dot: exciton line, biexciton binding energy and mode overlap."""

    e_x: float
    e_bind: float
    u: float
    weight: float = 1.0
    r: float = 0.0

    @property
    def e_xx(self) -> float:
        """Biexciton emission energy."""

        return self.e_x - self.e_bind


@dataclass(frozen=True, slots=True, eq=False)
class DotEnsemble(Sequence[QuantumDot]):
    """Immutable structure-of-arrays view over a dot population.

    Attribute names mirror :class:`QuantumDot`, so the dynamics functions accept an
    ensemble wherever they accept a single dot and work on every dot at once.
    """

    e_x: np.ndarray
    e_bind: np.ndarray
    u: np.ndarray
    weight: np.ndarray
    r: np.ndarray

    def __post_init__(self) -> None:
        size = None
        for item in fields(self):
            array = np.array(getattr(self, item.name), dtype=float, copy=True)
            array = np.atleast_1d(array)
            array.setflags(write=False)
            object.__setattr__(self, item.name, array)
            if size is None:
                size = array.shape[0]
            elif array.shape[0] != size:
                raise ConfigError("DotEnsemble arrays must share the same length")

    @classmethod
    def from_dots(cls, dots: Sequence[QuantumDot]) -> "DotEnsemble":
        return cls(
            e_x=[dot.e_x for dot in dots],
            e_bind=[dot.e_bind for dot in dots],
            u=[dot.u for dot in dots],
            weight=[dot.weight for dot in dots],
            r=[dot.r for dot in dots],
        )

    def __len__(self) -> int:
        return int(self.e_x.shape[0])

    @overload
    def __getitem__(self, index: int) -> QuantumDot: ...

    @overload
    def __getitem__(self, index: slice) -> "DotEnsemble": ...

    def __getitem__(self, index: int | slice) -> QuantumDot | "DotEnsemble":
        if isinstance(index, slice):
            return DotEnsemble(
                e_x=self.e_x[index],
                e_bind=self.e_bind[index],
                u=self.u[index],
                weight=self.weight[index],
                r=self.r[index],
            )
        return QuantumDot(
            e_x=float(self.e_x[index]),
            e_bind=float(self.e_bind[index]),
            u=float(self.u[index]),
            weight=float(self.weight[index]),
            r=float(self.r[index]),
        )

    def __iter__(self) -> Iterator[QuantumDot]:
        for index in range(len(self)):
            yield self[index]

    @property
    def e_xx(self) -> np.ndarray:
        return self.e_x - self.e_bind

    @property
    def total_weight(self) -> float:
        return float(math.fsum(self.weight))

    def scaled(self, factor: float) -> "DotEnsemble":
        """Return the same dots with every weight multiplied by ``factor``."""

        return replace(self, weight=self.weight * factor)

    def identical(self, other: "DotEnsemble") -> bool:
        return all(
            np.array_equal(getattr(self, item.name), getattr(other, item.name))
            for item in fields(self)
        )

    def describe(self) -> dict[str, Any]:
        if len(self) == 0:
            return {"dots": 0}
        return {
            "dots": len(self),
            "total_weight": self.total_weight,
            "e_x_min_meV": float(self.e_x.min()),
            "e_x_max_meV": float(self.e_x.max()),
            "mean_u": float(np.average(self.u, weights=self.weight)),
        }


@dataclass(frozen=True, slots=True)
class SmoothnessReport:
    """Exciton lines per spectral bin around the mode."""

    mean_lines: float
    min_lines: float
    bins: int
    bin_width: float
    warn: bool


def default_energy_order(window: float, mode: CavityMode, points_per_fwhm: int = 20) -> int:
    """Smallest odd node count giving at least ``points_per_fwhm`` nodes per mode width.

    An odd count keeps a node (and hence a spectral bin centre) exactly on E0.
    """

    count = math.ceil(window / (mode.fwhm / points_per_fwhm) - 1e-9)
    return count if count % 2 == 1 else count + 1


def aligned_bin_width(cfg: EnsembleConfig, mode: CavityMode) -> float:
    """Bin width for which every quadrature exciton node sits on a bin centre."""

    order = cfg.energy_order or default_energy_order(cfg.window, mode)
    return cfg.window / order


def sample_ensemble(cfg: EnsembleConfig, mode: CavityMode) -> DotEnsemble:
    """Draw ``cfg.n_dots`` dots with a generator seeded by ``cfg.seed``.

    Positions are uniform by area over the pillar section, exciton energies follow
    the inhomogeneous distribution restricted to the window, and binding energies
    are Gaussian.
    """

    cfg.validate(mode)
    if cfg.mode is not EnsembleMode.MONTE_CARLO:
        raise ConfigError("sample_ensemble requires an ensemble in monte_carlo mode")

    rng = np.random.default_rng(cfg.seed)
    count = cfg.n_dots
    low, high = cfg.window_bounds(mode)

    if mode.profile is FieldProfile.POINT_DOT:
        radius = np.zeros(count)
    else:
        radius = mode.radius * np.sqrt(rng.random(count))

    if cfg.inhomogeneous is InhomogeneousShape.GAUSSIAN:
        centre = (low + high) / 2.0
        scale = cfg.inhomogeneous_fwhm / FWHM_TO_SIGMA
        e_x = stats.truncnorm.rvs(
            (low - centre) / scale,
            (high - centre) / scale,
            loc=centre,
            scale=scale,
            size=count,
            random_state=rng,
        )
    else:
        e_x = rng.uniform(low, high, count)

    if cfg.binding_fwhm == 0:
        e_bind = np.full(count, cfg.binding_mean)
    else:
        e_bind = rng.normal(cfg.binding_mean, cfg.binding_sigma, count)

    ensemble = DotEnsemble(
        e_x=e_x,
        e_bind=e_bind,
        u=field_intensity(radius, mode),
        weight=np.ones(count),
        r=radius,
    )
    logger.info(
        "ensemble.monte_carlo.sampled",
        dots=count,
        seed=cfg.seed,
        profile=mode.profile.value,
    )
    return ensemble


def _radial_nodes(cfg: EnsembleConfig, mode: CavityMode) -> tuple[np.ndarray, np.ndarray]:
    if mode.profile is FieldProfile.POINT_DOT:
        return np.zeros(1), np.ones(1)
    x, w = special.roots_legendre(cfg.radial_order)
    radius = mode.radius * (x + 1.0) / 2.0
    # area element 2r dr / R², mapped from [-1, 1]
    weights = w * radius / mode.radius
    return radius, weights / weights.sum()


def _energy_nodes(cfg: EnsembleConfig, mode: CavityMode) -> tuple[np.ndarray, np.ndarray]:
    order = cfg.energy_order or default_energy_order(cfg.window, mode)
    low, high = cfg.window_bounds(mode)
    step = (high - low) / order
    energies = low + (np.arange(order) + 0.5) * step
    if cfg.inhomogeneous is InhomogeneousShape.GAUSSIAN:
        centre = (low + high) / 2.0
        scale = cfg.inhomogeneous_fwhm / FWHM_TO_SIGMA
        weights = np.exp(-0.5 * ((energies - centre) / scale) ** 2)
    else:
        weights = np.ones(order)
    return energies, weights / weights.sum()


def _binding_nodes(cfg: EnsembleConfig) -> tuple[np.ndarray, np.ndarray]:
    if cfg.binding_fwhm == 0 or cfg.binding_order == 1:
        return np.array([cfg.binding_mean]), np.ones(1)
    x, w = hermegauss(cfg.binding_order)
    return cfg.binding_mean + cfg.binding_sigma * x, w / w.sum()


def quadrature_ensemble(cfg: EnsembleConfig, mode: CavityMode) -> DotEnsemble:
    """Tensor grid of weighted nodes (radius × exciton energy × binding energy).

    Radial nodes are Gauss–Legendre on [0, R] weighted by the area element, exciton
    nodes are the midpoints of ``energy_order`` equal slices of the window and
    binding nodes are Gauss–Hermite over the binding distribution. The weights sum
    to ``cfg.n_dots``.
    """

    cfg.validate(mode)
    if cfg.mode is not EnsembleMode.QUADRATURE:
        raise ConfigError("quadrature_ensemble requires an ensemble in quadrature mode")

    radius, w_r = _radial_nodes(cfg, mode)
    energies, w_e = _energy_nodes(cfg, mode)
    bindings, w_b = _binding_nodes(cfg)

    rr, ee, bb = np.meshgrid(radius, energies, bindings, indexing="ij")
    wr, we, wb = np.meshgrid(w_r, w_e, w_b, indexing="ij")
    weight = float(cfg.n_dots) * (wr * we * wb)

    ensemble = DotEnsemble(
        e_x=ee.ravel(),
        e_bind=bb.ravel(),
        u=field_intensity(rr.ravel(), mode),
        weight=weight.ravel(),
        r=rr.ravel(),
    )
    logger.info(
        "ensemble.quadrature.built",
        radial_nodes=radius.size,
        energy_nodes=energies.size,
        binding_nodes=bindings.size,
        dots=len(ensemble),
        profile=mode.profile.value,
    )
    return ensemble


def build_ensemble(cfg: EnsembleConfig, mode: CavityMode) -> DotEnsemble:
    if cfg.mode is EnsembleMode.MONTE_CARLO:
        return sample_ensemble(cfg, mode)
    return quadrature_ensemble(cfg, mode)


def smoothness_check(
    dots: DotEnsemble | Sequence[QuantumDot], bin_width: float, mode: CavityMode
) -> SmoothnessReport:
    """Count exciton lines per bin over E0 ± 3 mode linewidths.

    The ensemble acts as a smooth internal light source only when every bin holds
    many lines; fewer than ten in any bin flags a warning.
    """

    if not bin_width > 0:
        raise ConfigError(f"bin_width must be > 0, got {bin_width}")
    ensemble = dots if isinstance(dots, DotEnsemble) else DotEnsemble.from_dots(dots)
    if len(ensemble) == 0:
        raise ConfigError("Cannot check the smoothness of an empty ensemble")

    span = SMOOTHNESS_HALF_SPAN * mode.fwhm
    bins = max(1, int(math.floor(2.0 * span / bin_width)))
    low = mode.e0 - bins * bin_width / 2.0
    edges = low + bin_width * np.arange(bins + 1)
    counts, _ = np.histogram(ensemble.e_x, bins=edges, weights=ensemble.weight)

    report = SmoothnessReport(
        mean_lines=float(counts.mean()),
        min_lines=float(counts.min()),
        bins=bins,
        bin_width=bin_width,
        warn=bool(counts.min() < SMOOTHNESS_MIN_LINES),
    )
    if report.warn:
        logger.warning(
            "ensemble.smoothness.warn",
            mean_lines=report.mean_lines,
            min_lines=report.min_lines,
            bins=bins,
            bin_width=bin_width,
        )
    return report


__all__ = [
    "DotEnsemble",
    "EnsembleConfig",
    "EnsembleMode",
    "FWHM_TO_SIGMA",
    "InhomogeneousShape",
    "QuantumDot",
    "SmoothnessReport",
    "aligned_bin_width",
    "build_ensemble",
    "default_energy_order",
    "quadrature_ensemble",
    "sample_ensemble",
    "smoothness_check",
]
