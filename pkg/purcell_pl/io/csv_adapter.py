"""CSV adapters for spectra and power sweeps."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from ..exceptions import ConfigError, OutputError
from ..physics.analysis import SWEEP_COLUMNS, SweepResult
from ..physics.spectrum import Channel, CollectionGeometry, Spectrum, combine, normalize_peak
from .files import atomic_write_text


FLOAT_FORMAT = "%.17g"
SPECTRUM_COLUMNS = ["energy_meV", "i_a", "i_b", "i_detected"]


@dataclass(frozen=True, slots=True, eq=False)
class SpectrumTable:
    """Spectrum channels as read back from a CSV file."""

    energies: np.ndarray
    i_a: np.ndarray
    i_b: np.ndarray
    i_detected: np.ndarray

    def channel(self, channel: Channel | str) -> np.ndarray:
        selected = Channel(channel)
        if selected is Channel.MODE:
            return self.i_a
        if selected is Channel.LEAKY:
            return self.i_b
        return self.i_detected


def _normalized(curve: np.ndarray) -> np.ndarray:
    if not curve.size or float(curve.max()) <= 0:
        return np.zeros_like(curve)
    return normalize_peak(curve)


class SpectrumCSVAdapter:
    """Read and write spectrum files with the ``energy_meV,i_a,i_b,i_detected`` schema."""

    def __init__(self, path: Path, encoding: str = "utf-8") -> None:
        self.path = Path(path)
        self.encoding = encoding
        self.fieldnames = list(SPECTRUM_COLUMNS)

    def to_frame(
        self, spectrum: Spectrum, geom: CollectionGeometry, *, normalized: bool = False
    ) -> pd.DataFrame:
        """Tabulate a spectrum; ``normalized`` divides each channel by its own maximum."""

        detected = combine(spectrum, geom)
        columns = [spectrum.i_a, spectrum.i_b, detected]
        if normalized:
            columns = [_normalized(column) for column in columns]
        return pd.DataFrame(
            dict(zip(self.fieldnames, [spectrum.energies, *columns])),
            columns=self.fieldnames,
        )

    def write(
        self, spectrum: Spectrum, geom: CollectionGeometry, *, normalized: bool = False
    ) -> Path:
        frame = self.to_frame(spectrum, geom, normalized=normalized)
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return atomic_write_text(self.path, buffer.getvalue(), self.encoding)

    def read(self) -> SpectrumTable:
        frame = _read_frame(self.path, self.encoding, self.fieldnames)
        return SpectrumTable(
            energies=frame["energy_meV"].to_numpy(dtype=float),
            i_a=frame["i_a"].to_numpy(dtype=float),
            i_b=frame["i_b"].to_numpy(dtype=float),
            i_detected=frame["i_detected"].to_numpy(dtype=float),
        )


class SweepCSVAdapter:
    """Read and write power-sweep summaries."""

    def __init__(self, path: Path, encoding: str = "utf-8") -> None:
        self.path = Path(path)
        self.encoding = encoding
        self.fieldnames = list(SWEEP_COLUMNS)

    def write(self, result: SweepResult) -> Path:
        buffer = io.StringIO()
        result.to_frame().to_csv(
            buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
        )
        return atomic_write_text(self.path, buffer.getvalue(), self.encoding)

    def read(self, channel: Channel = Channel.MODE) -> SweepResult:
        frame = _read_frame(self.path, self.encoding, self.fieldnames)
        return SweepResult.from_frame(frame, channel=channel)


def _read_frame(path: Path, encoding: str, fieldnames: list[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, encoding=encoding, float_precision="round_trip")
    except FileNotFoundError as exc:
        raise ConfigError(f"CSV file not found: {path}") from exc
    except OSError as exc:
        raise OutputError(f"Unable to read {path}: {exc}") from exc
    if list(frame.columns) != fieldnames:
        raise ConfigError(
            f"Unexpected header in {path}: {list(frame.columns)} (expected {fieldnames})"
        )
    return frame


__all__ = ["SpectrumCSVAdapter", "SpectrumTable", "SweepCSVAdapter"]
