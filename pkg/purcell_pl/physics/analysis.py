"""Experiment-facing observables: measured Q, effective Purcell factor, dip contrast, sweeps."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np
import pandas as pd

from ..config import settings
from ..exceptions import (
    AmbiguityError,
    AnalysisError,
    ConfigError,
    DomainError,
    RangeError,
    SweepError,
)
from ..logging import get_logger, run_context
from .cavity import CavityMode, broadening_factor
from .dynamics import BiexcitonEnhancement
from .ensemble import DotEnsemble
from .spectrum import (
    Channel,
    CollectionGeometry,
    SpectralGrid,
    Spectrum,
    synthesize,
)


DIP_REFERENCE_WINDOW = (8.0, 12.0)
"""Reference detunings for the dip contrast, in mode linewidths on both sides of E0."""

FLATNESS_HALF_SPAN = 5.0

SWEEP_COLUMNS = [
    "power_gamma0",
    "q_measured",
    "e_peak_meV",
    "fwhm_meV",
    "dip_contrast",
]

logger = get_logger(__name__)


@dataclass(frozen=True, slots=True)
class PeakReport:
    e_peak: float
    fwhm: float
    q_measured: float
    height: float

    def __post_init__(self) -> None:
        if not self.fwhm > 0:
            raise AnalysisError(f"FWHM must be > 0, got {self.fwhm!r}")


def _axis(grid: SpectralGrid | np.ndarray) -> tuple[np.ndarray, float]:
    if isinstance(grid, SpectralGrid):
        return grid.energies, grid.bin_width
    energies = np.asarray(grid, dtype=float)
    if energies.size < 2:
        raise RangeError("An energy axis needs at least two bins")
    steps = np.diff(energies)
    if np.any(steps <= 0):
        raise DomainError("Energy axis must be strictly increasing")
    return energies, float(steps.mean())


def _half_crossing(
    energies: np.ndarray, values: np.ndarray, start: int, step: int, level: float
) -> float:
    index = start
    while 0 <= index + step < values.size:
        nxt = index + step
        if values[nxt] <= level:
            fraction = (values[index] - level) / (values[index] - values[nxt])
            return float(energies[index] + fraction * (energies[nxt] - energies[index]))
        index = nxt
    raise RangeError("Half-maximum crossing lies beyond the edge of the grid")


def peak_fwhm(curve: np.ndarray, grid: SpectralGrid | np.ndarray) -> PeakReport:
    """Peak position and width of a sampled line.

    The vertex of the parabola through the three bins around the maximum gives the
    peak energy and height; the half-maximum crossings are found by linear
    interpolation walking outwards from the peak.
    """

    energies, _ = _axis(grid)
    values = np.asarray(curve, dtype=float)
    if values.shape != energies.shape:
        raise AnalysisError("Curve and energy axis differ in length")

    top = int(np.argmax(values))
    peak = values[top]
    if np.count_nonzero(values == peak) > 1:
        raise AmbiguityError(f"{np.count_nonzero(values == peak)} bins share the maximum")
    if top == 0 or top == values.size - 1:
        raise RangeError(f"Maximum at the grid edge ({energies[top]:.6f} meV)")

    left, centre, right = values[top - 1 : top + 2]
    curvature = left - 2.0 * centre + right
    offset = 0.0 if curvature == 0 else 0.5 * (left - right) / curvature
    spacing = 0.5 * (energies[top + 1] - energies[top - 1])
    e_peak = float(energies[top] + offset * spacing)
    height = float(centre - 0.25 * (left - right) * offset)

    level = height / 2.0
    low = _half_crossing(energies, values, top, -1, level)
    high = _half_crossing(energies, values, top, 1, level)
    fwhm = high - low
    return PeakReport(e_peak=e_peak, fwhm=fwhm, q_measured=e_peak / fwhm, height=height)


def effective_purcell(
    q_true: float, q_measured_low_p: float, gamma_leak: float = 1.0
) -> float:
    """Invert the low-power broadening law √((F+γ)/γ) = Q_true / Q_measured."""

    if not (q_true > 0 and q_measured_low_p > 0 and gamma_leak > 0):
        raise DomainError("q_true, q_measured_low_p and gamma_leak must be > 0")
    if q_measured_low_p >= q_true:
        raise DomainError(
            f"Measured Q {q_measured_low_p:g} is not below the cavity Q {q_true:g}; "
            "there is no broadening to invert"
        )
    return gamma_leak * ((q_true / q_measured_low_p) ** 2 - 1.0)


def forward_broadening(q_true: float, fp_eff: float, gamma_leak: float = 1.0) -> float:
    """Apparent Q of a line broadened by an effective Purcell factor ``fp_eff``."""

    return q_true / broadening_factor(fp_eff, gamma_leak)


def dip_contrast(
    curve: np.ndarray, grid: SpectralGrid | np.ndarray, mode: CavityMode
) -> float:
    """Fractional suppression (I_ref − I(E0)) / I_ref; negative values mean a peak.

    ``I_ref`` is the mean over the bins detuned by 8 to 12 mode linewidths on both
    sides of the resonance.
    """

    energies, _ = _axis(grid)
    values = np.asarray(curve, dtype=float)
    near, far = (factor * mode.fwhm for factor in DIP_REFERENCE_WINDOW)
    if mode.e0 - far < energies[0] or mode.e0 + far > energies[-1]:
        raise RangeError(
            f"Dip reference window E0 ± {far:.4g} meV exceeds the grid "
            f"[{energies[0]:.4f}, {energies[-1]:.4f}] meV"
        )

    detuning = np.abs(energies - mode.e0)
    reference = values[(detuning >= near) & (detuning <= far)]
    if reference.size == 0:
        raise RangeError("No bins inside the dip reference window")
    i_ref = float(reference.mean())
    if not i_ref > 0:
        raise AnalysisError("Curve is not positive over the dip reference window")
    i_res = float(values[int(np.argmin(detuning))])
    return (i_ref - i_res) / i_ref


def flatness(
    curve: np.ndarray,
    grid: SpectralGrid | np.ndarray,
    center: float,
    half_span: float = FLATNESS_HALF_SPAN,
) -> float:
    """max/min of a curve over ``center ± half_span``."""

    energies, _ = _axis(grid)
    values = np.asarray(curve, dtype=float)
    if center - half_span < energies[0] or center + half_span > energies[-1]:
        raise RangeError("Flatness window exceeds the grid")
    window = values[np.abs(energies - center) <= half_span]
    lowest = float(window.min())
    if not lowest > 0:
        raise AnalysisError("Curve vanishes inside the flatness window")
    return float(window.max()) / lowest


@dataclass(frozen=True, slots=True)
class SpectrumAnalysis:
    p: float
    channel: Channel
    peak: PeakReport | None
    dip_contrast: float | None


def analyse_spectrum(
    spec: Spectrum,
    mode: CavityMode,
    geom: CollectionGeometry | None = None,
    channel: Channel = Channel.MODE,
) -> SpectrumAnalysis:
    """Peak report of ``channel`` and dip contrast of the detected signal.

    Either observable is ``None`` when the curve does not support it (no interior
    peak, reference window outside the grid).
    """

    geometry = geom or CollectionGeometry()
    curve = spec.channel(channel, geometry)
    try:
        peak = peak_fwhm(curve, spec.grid)
    except AnalysisError as exc:
        logger.debug("analysis.peak.unavailable", channel=str(channel), reason=str(exc))
        peak = None
    try:
        contrast = dip_contrast(spec.channel(Channel.DETECTED, geometry), spec.grid, mode)
    except AnalysisError as exc:
        logger.debug("analysis.dip.unavailable", reason=str(exc))
        contrast = None
    return SpectrumAnalysis(
        p=float(spec.meta.get("p", math.nan)),
        channel=Channel(channel),
        peak=peak,
        dip_contrast=contrast,
    )


@dataclass(frozen=True, slots=True)
class SweepRow:
    p: float
    q_measured: float
    e_peak: float
    fwhm: float
    dip_contrast: float


@dataclass(frozen=True, slots=True)
class SweepResult:
    """Observables per pump power, rows strictly increasing in power."""

    rows: tuple[SweepRow, ...]
    channel: Channel = Channel.MODE

    def __post_init__(self) -> None:
        powers = [row.p for row in self.rows]
        if any(b <= a for a, b in zip(powers, powers[1:])):
            raise AnalysisError("Sweep rows must be strictly increasing in power")

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def powers(self) -> np.ndarray:
        return np.array([row.p for row in self.rows])

    @property
    def q_measured(self) -> np.ndarray:
        return np.array([row.q_measured for row in self.rows])

    @property
    def dip_contrasts(self) -> np.ndarray:
        return np.array([row.dip_contrast for row in self.rows])

    def at(self, p: float) -> SweepRow:
        for row in self.rows:
            if math.isclose(row.p, p, rel_tol=1e-12):
                return row
        raise KeyError(p)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (row.p, row.q_measured, row.e_peak, row.fwhm, row.dip_contrast)
                for row in self.rows
            ],
            columns=SWEEP_COLUMNS,
        )

    @classmethod
    def from_frame(
        cls, frame: pd.DataFrame, channel: Channel = Channel.MODE
    ) -> "SweepResult":
        missing = [column for column in SWEEP_COLUMNS if column not in frame.columns]
        if missing:
            raise ConfigError(f"Sweep table lacks columns: {', '.join(missing)}")
        rows = tuple(
            SweepRow(
                p=float(record.power_gamma0),
                q_measured=float(record.q_measured),
                e_peak=float(record.e_peak_meV),
                fwhm=float(record.fwhm_meV),
                dip_contrast=float(record.dip_contrast),
            )
            for record in frame.itertuples(index=False)
        )
        return cls(rows=rows, channel=channel)


def _check_powers(powers: Iterable[float]) -> list[float]:
    values = [float(p) for p in powers]
    if not values:
        raise ConfigError("A power sweep needs at least one pump rate")
    if any(p < 0 for p in values):
        raise DomainError("Pump rates must be >= 0")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("Sweep powers must be sorted in strictly ascending order")
    return values


def power_sweep(
    dots: DotEnsemble,
    mode: CavityMode,
    powers: Sequence[float],
    *,
    geom: CollectionGeometry | None = None,
    channel: Channel = Channel.MODE,
    bins: SpectralGrid | None = None,
    biexciton_enhancement: BiexcitonEnhancement = BiexcitonEnhancement.BIEXCITON,
    max_workers: int | None = None,
) -> SweepResult:
    """Synthesise and analyse one spectrum per pump power on a shared ensemble.

    Q and peak position come from ``channel`` (mode photons by default); the dip
    contrast is measured on the detected signal of ``geom``. Evaluations run on a
    thread pool and rows come back in input order. Any failure is re-raised as a
    :class:`SweepError` carrying the offending power.
    """

    values = _check_powers(powers)
    geometry = geom or CollectionGeometry()
    grid = bins or SpectralGrid.covering(dots, mode, mode.fwhm / 20.0)

    def evaluate(p: float) -> SweepRow:
        with run_context(power=p):
            try:
                spectrum = synthesize(
                    dots, mode, p, grid, biexciton_enhancement=biexciton_enhancement
                )
                peak = peak_fwhm(spectrum.channel(channel, geometry), grid)
                contrast = dip_contrast(
                    spectrum.channel(Channel.DETECTED, geometry), grid, mode
                )
            except SweepError:
                raise
            except Exception as exc:
                raise SweepError(p, exc) from exc
            row = SweepRow(
                p=p,
                q_measured=peak.q_measured,
                e_peak=peak.e_peak,
                fwhm=peak.fwhm,
                dip_contrast=contrast,
            )
            logger.info(
                "analysis.sweep.row",
                q_measured=row.q_measured,
                fwhm=row.fwhm,
                dip_contrast=row.dip_contrast,
            )
            return row

    workers = max_workers or settings.max_workers
    with ThreadPoolExecutor(max_workers=workers) as executor:
        rows = tuple(executor.map(evaluate, values))
    return SweepResult(rows=rows, channel=Channel(channel))


def describe_sweep(result: SweepResult) -> dict[str, Any]:
    return {
        "points": len(result),
        "channel": result.channel.value,
        "q_low_power": float(result.rows[0].q_measured),
        "q_high_power": float(result.rows[-1].q_measured),
    }


__all__ = [
    "PeakReport",
    "SpectrumAnalysis",
    "SweepResult",
    "SweepRow",
    "analyse_spectrum",
    "describe_sweep",
    "dip_contrast",
    "effective_purcell",
    "flatness",
    "forward_broadening",
    "peak_fwhm",
    "power_sweep",
]
