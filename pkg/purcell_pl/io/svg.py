"""SVG line plots of spectra and sweeps."""

from __future__ import annotations

import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from ..physics.analysis import SweepResult  # noqa: E402
from ..physics.spectrum import CollectionGeometry, Spectrum, combine  # noqa: E402
from .files import atomic_write_bytes  # noqa: E402


def _save(figure: Figure, path: Path) -> Path:
    buffer = io.BytesIO()
    figure.savefig(buffer, format="svg", bbox_inches="tight")
    return atomic_write_bytes(path, buffer.getvalue())


def plot_spectrum(
    spectrum: Spectrum,
    geom: CollectionGeometry,
    path: Path,
    *,
    title: str = "",
    smoothing: float = 0.0,
) -> Path:
    """Plot both channels and the detected signal against energy."""

    shown = spectrum.smoothed(smoothing) if smoothing > 0 else spectrum
    figure = Figure(figsize=(7.0, 4.0))
    axes = figure.add_subplot()
    energies = shown.energies
    axes.plot(energies, shown.i_a, label="mode (I_A)", linewidth=1.0)
    axes.plot(energies, shown.i_b, label="leaky (I_B)", linewidth=1.0)
    axes.plot(
        energies,
        combine(shown, geom),
        label=f"detected (A={geom.a:g}, B={geom.b:g})",
        linewidth=1.2,
        color="black",
    )
    axes.set_xlabel("Energy (meV)")
    axes.set_ylabel("Photon rate (Γ0 per bin)")
    axes.set_title(title or f"P = {spectrum.pump:g} Γ0")
    axes.legend(loc="best", fontsize="small")
    return _save(figure, path)


def plot_sweep(result: SweepResult, path: Path, *, q_true: float | None = None) -> Path:
    """Measured Q against pump power on a logarithmic power axis."""

    figure = Figure(figsize=(6.0, 4.0))
    axes = figure.add_subplot()
    powers = result.powers
    axes.plot(powers, result.q_measured, marker="o", markersize=3)
    if q_true is not None:
        axes.axhline(q_true, linestyle="--", color="grey", label=f"cavity Q = {q_true:g}")
        axes.legend(loc="lower right", fontsize="small")
    if powers.size and powers.min() > 0:
        axes.set_xscale("log")
    axes.set_xlabel("Pump rate P (Γ0)")
    axes.set_ylabel("Measured Q")
    return _save(figure, path)


__all__ = ["plot_spectrum", "plot_sweep"]
