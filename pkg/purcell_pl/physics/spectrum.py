"""Two-channel PL spectrum synthesis: mode photons (I_A) and leaky photons (I_B)."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from enum import StrEnum
from typing import Any

import numpy as np

from ..exceptions import AccumulationError, ConfigError, DomainError
from ..logging import get_logger
from .cavity import CavityMode
from .dynamics import BiexcitonEnhancement, steady_state, transition_rates
from .ensemble import DotEnsemble, QuantumDot


DEFAULT_BINS_PER_FWHM = 20
MAX_BIN_FRACTION_OF_FWHM = 0.1

logger = get_logger(__name__)


class Channel(StrEnum):
    MODE = "mode"
    LEAKY = "leaky"
    DETECTED = "detected"


@dataclass(frozen=True, slots=True)
class CollectionGeometry:
    """Collection plus detection efficiencies for mode (A) and leaky (B) photons."""

    a: float = 1.0
    b: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "b"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"Collection efficiency {name} must lie in [0, 1]")
        if self.a == 0 and self.b == 0:
            raise DomainError("Collection efficiencies A and B cannot both be zero")


@dataclass(frozen=True, slots=True)
class SpectralGrid:
    """Uniform grid of bins whose centres are ``center + k * bin_width``.

    Bin ``k`` spans ``[center + (k - 1/2) w, center + (k + 1/2) w)``, so a line is
    assigned to the nearest centre and the mode resonance sits on a centre.
    """

    center: float
    bin_width: float
    k_min: int
    k_max: int

    def __post_init__(self) -> None:
        if not self.bin_width > 0:
            raise ConfigError(f"bin_width must be > 0, got {self.bin_width}")
        if self.k_max < self.k_min:
            raise ConfigError("SpectralGrid needs k_max >= k_min")

    @classmethod
    def covering(
        cls,
        dots: DotEnsemble,
        mode: CavityMode,
        bin_width: float,
        *,
        window: tuple[float, float] | None = None,
        margin_bins: int = 2,
    ) -> "SpectralGrid":
        """Smallest E0-centred grid holding every exciton and biexciton line."""

        if not bin_width > 0:
            raise ConfigError(f"bin_width must be > 0, got {bin_width}")
        lows = [float(dots.e_x.min()), float(dots.e_xx.min())]
        highs = [float(dots.e_x.max()), float(dots.e_xx.max())]
        if window is not None:
            lows.append(window[0])
            highs.append(window[1])
        k_min = int(np.rint((min(lows) - mode.e0) / bin_width)) - margin_bins
        k_max = int(np.rint((max(highs) - mode.e0) / bin_width)) + margin_bins
        return cls(center=mode.e0, bin_width=bin_width, k_min=k_min, k_max=k_max)

    @property
    def size(self) -> int:
        return self.k_max - self.k_min + 1

    @property
    def energies(self) -> np.ndarray:
        return self.center + self.bin_width * np.arange(self.k_min, self.k_max + 1)

    @property
    def low(self) -> float:
        return self.center + (self.k_min - 0.5) * self.bin_width

    @property
    def high(self) -> float:
        return self.center + (self.k_max + 0.5) * self.bin_width

    def index_of(self, energies: np.ndarray) -> np.ndarray:
        """Bin index of every energy; raises when one lies outside the grid."""

        k = np.rint((np.asarray(energies, dtype=float) - self.center) / self.bin_width)
        outside = (k < self.k_min) | (k > self.k_max)
        if np.any(outside):
            offending = float(np.asarray(energies, dtype=float)[outside][0])
            raise AccumulationError(offending, self.low, self.high)
        return k.astype(np.int64) - self.k_min

    def position_of(self, energy: float) -> int:
        return int(self.index_of(np.array([energy]))[0])


@dataclass(frozen=True, slots=True, eq=False)
class Spectrum:
    """Photon rates per bin (units of Γ0 times dot count) in both channels."""

    grid: SpectralGrid
    i_a: np.ndarray
    i_b: np.ndarray
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def energies(self) -> np.ndarray:
        return self.grid.energies

    @property
    def pump(self) -> float | None:
        return self.meta.get("p")

    @property
    def total(self) -> np.ndarray:
        return self.i_a + self.i_b

    def channel(
        self, channel: Channel | str, geom: CollectionGeometry | None = None
    ) -> np.ndarray:
        selected = Channel(channel)
        if selected is Channel.MODE:
            return self.i_a
        if selected is Channel.LEAKY:
            return self.i_b
        return self.detected(geom)

    def detected(self, geom: CollectionGeometry | None = None) -> np.ndarray:
        """Detected signal; without a geometry every photon is collected."""

        return combine(self, geom or CollectionGeometry(a=1.0, b=1.0))

    def smoothed(self, width: float) -> "Spectrum":
        """Convolve both channels with an area-normalised Lorentzian of FWHM ``width``.

        Display only: analysis and acceptance checks use the raw delta-line spectra.
        """

        if width <= 0:
            return self
        half = width / 2.0
        size = self.grid.size
        # offsets beyond the grid span never reach another bin
        reach = min(int(math.ceil(20.0 * width / self.grid.bin_width)), size - 1)
        offsets = self.grid.bin_width * np.arange(-reach, reach + 1)
        kernel = half / (offsets**2 + half**2)
        kernel /= kernel.sum()

        def convolve(values: np.ndarray) -> np.ndarray:
            return np.convolve(values, kernel)[reach : reach + size]

        return replace(
            self,
            i_a=convolve(self.i_a),
            i_b=convolve(self.i_b),
            meta={**self.meta, "smoothing_meV": width},
        )


def synthesize(
    dots: DotEnsemble | Sequence[QuantumDot],
    mode: CavityMode,
    p: float,
    bins: SpectralGrid | None = None,
    *,
    bin_width: float | None = None,
    biexciton_enhancement: BiexcitonEnhancement = BiexcitonEnhancement.BIEXCITON,
) -> Spectrum:
    """Accumulate every dot's exciton and biexciton photons into the two channels.

    Each line is a delta function dropped into exactly one bin, weighted by the dot
    weight; the mode fraction β goes to I_A and the remainder to I_B.
    """

    ensemble = dots if isinstance(dots, DotEnsemble) else DotEnsemble.from_dots(dots)
    if len(ensemble) == 0:
        raise ConfigError("Cannot synthesise a spectrum from an empty ensemble")

    grid = bins or SpectralGrid.covering(
        ensemble, mode, bin_width or mode.fwhm / DEFAULT_BINS_PER_FWHM
    )
    if grid.bin_width > MAX_BIN_FRACTION_OF_FWHM * mode.fwhm * (1 + 1e-12):
        raise ConfigError(
            f"Bin width {grid.bin_width:.4g} meV exceeds a tenth of the mode "
            f"linewidth ({mode.fwhm:.4g} meV)"
        )

    rates = transition_rates(
        ensemble, mode, biexciton_enhancement=biexciton_enhancement
    )
    state = steady_state(p, rates)

    weight = ensemble.weight
    exciton = weight * np.asarray(state.i_x)
    biexciton = weight * np.asarray(state.i_xx)
    beta_x = np.asarray(rates.beta_x)
    beta_xx = np.asarray(rates.beta_xx)

    idx_x = grid.index_of(ensemble.e_x)
    idx_xx = grid.index_of(ensemble.e_xx)
    size = grid.size
    i_a = np.bincount(idx_x, exciton * beta_x, size) + np.bincount(
        idx_xx, biexciton * beta_xx, size
    )
    i_b = np.bincount(idx_x, exciton * (1.0 - beta_x), size) + np.bincount(
        idx_xx, biexciton * (1.0 - beta_xx), size
    )

    spectrum = Spectrum(
        grid=grid,
        i_a=i_a,
        i_b=i_b,
        meta={
            "p": p,
            "ensemble": ensemble.describe(),
            "mode": mode.describe(),
            "biexciton_enhancement": BiexcitonEnhancement(biexciton_enhancement).value,
        },
    )
    logger.debug(
        "spectrum.synthesize.completed",
        p=p,
        dots=len(ensemble),
        bins=size,
        photons=float(math.fsum(spectrum.total)),
    )
    return spectrum


def combine(spec: Spectrum, geom: CollectionGeometry) -> np.ndarray:
    """Detected spectrum I(E) = A·I_A(E) + B·I_B(E)."""

    return geom.a * spec.i_a + geom.b * spec.i_b


def normalize_peak(curve: np.ndarray) -> np.ndarray:
    """Divide a channel by its maximum."""

    values = np.asarray(curve, dtype=float)
    peak = float(values.max()) if values.size else 0.0
    if not peak > 0:
        raise DomainError("Cannot normalise a channel whose maximum is not positive")
    return values / peak


__all__ = [
    "Channel",
    "CollectionGeometry",
    "SpectralGrid",
    "Spectrum",
    "combine",
    "normalize_peak",
    "synthesize",
]
