"""Scenario runner that loads presets, runs simulations and emits artefacts."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..config import settings
from ..exceptions import PresetNotFoundError
from ..io.csv_adapter import SpectrumCSVAdapter, SweepCSVAdapter
from ..io.files import atomic_write_text
from ..io.svg import plot_spectrum, plot_sweep
from ..logging import get_logger, run_context
from ..physics.analysis import SweepResult, describe_sweep, power_sweep
from ..physics.cavity import CavityMode
from ..physics.ensemble import DotEnsemble, build_ensemble, smoothness_check
from ..physics.spectrum import SpectralGrid, Spectrum, synthesize
from .models import Scenario, load_scenario


MANIFEST_NAME = "manifest.yaml"
SWEEP_NAME = "sweep.csv"

logger = get_logger(__name__)


@dataclass(slots=True, eq=False)
class PreparedScenario:
    """Mode, ensemble and spectral grid shared by every pump rate of a scenario."""

    scenario: Scenario
    mode: CavityMode
    ensemble: DotEnsemble
    grid: SpectralGrid

    def spectrum(self, p: float) -> Spectrum:
        return synthesize(
            self.ensemble,
            self.mode,
            p,
            self.grid,
            biexciton_enhancement=self.scenario.ensemble.biexciton_enhancement,
        )

    def sweep(self, powers: list[float] | None = None) -> SweepResult:
        return power_sweep(
            self.ensemble,
            self.mode,
            powers or self.scenario.pump.sweep_powers(),
            geom=self.scenario.to_geometry(),
            channel=self.scenario.pump.channel,
            bins=self.grid,
            biexciton_enhancement=self.scenario.ensemble.biexciton_enhancement,
        )


@dataclass(slots=True)
class RunSummary:
    scenario: str
    files: list[Path] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict[str, Any]:
        return {
            "scenario": self.scenario,
            "files": [str(path) for path in self.files],
            **self.details,
        }


def spectrum_filename(prefix: str, p: float, *, normalized: bool = False) -> str:
    suffix = "_norm" if normalized else ""
    return f"{prefix}_P{p:g}{suffix}.csv"


class ScenarioRunner:
    """Load scenarios, build their ensembles and write CSV/SVG/YAML artefacts."""

    def __init__(self, *, presets_dir: Path | None = None) -> None:
        self._presets_dir = Path(presets_dir or settings.presets_dir)

    def list_presets(self) -> list[str]:
        if not self._presets_dir.exists():
            return []
        return sorted(path.stem for path in self._presets_dir.glob("*.yaml"))

    def load_preset(self, name: str) -> Scenario:
        path = self._presets_dir / f"{name.removesuffix('.yaml')}.yaml"
        if not path.exists():
            raise PresetNotFoundError(name, self.list_presets())
        return load_scenario(path)

    def load(self, path: Path) -> Scenario:
        return load_scenario(path)

    def prepare(self, scenario: Scenario) -> PreparedScenario:
        mode = scenario.to_mode()
        cfg = scenario.to_ensemble_config()
        ensemble = build_ensemble(cfg, mode)
        bin_width = scenario.bin_width(mode)
        grid = SpectralGrid.covering(
            ensemble, mode, bin_width, window=cfg.window_bounds(mode)
        )
        smoothness_check(ensemble, bin_width, mode)
        return PreparedScenario(scenario=scenario, mode=mode, ensemble=ensemble, grid=grid)

    def run_spectrum(
        self,
        scenario: Scenario,
        *,
        out_dir: Path | None = None,
        normalized: bool = False,
        prepared: PreparedScenario | None = None,
    ) -> RunSummary:
        """Write one spectrum CSV (and optional SVG) per pump rate of the scenario."""

        target = Path(out_dir or scenario.output_dir())
        setup = prepared or self.prepare(scenario)
        geom = scenario.to_geometry()
        prefix = scenario.output.prefix
        summary = RunSummary(scenario=scenario.name)
        with run_context(scenario=scenario.name):
            for p in scenario.pump.spectrum_powers():
                spectrum = setup.spectrum(p)
                raw = SpectrumCSVAdapter(target / spectrum_filename(prefix, p)).write(
                    spectrum, geom
                )
                summary.files.append(raw)
                if normalized:
                    summary.files.append(
                        SpectrumCSVAdapter(
                            target / spectrum_filename(prefix, p, normalized=True)
                        ).write(spectrum, geom, normalized=True)
                    )
                if scenario.output.plot:
                    summary.files.append(
                        plot_spectrum(
                            spectrum,
                            geom,
                            target / f"{prefix}_P{p:g}.svg",
                            title=f"{scenario.name}: P = {p:g} Γ0",
                            smoothing=scenario.output.smoothing,
                        )
                    )
                logger.info("runner.spectrum.written", power=p, path=str(raw))
        return summary

    def run_sweep(
        self,
        scenario: Scenario,
        *,
        out_dir: Path | None = None,
        prepared: PreparedScenario | None = None,
    ) -> RunSummary:
        """Analyse the scenario over its sweep powers and write ``sweep.csv``."""

        target = Path(out_dir or scenario.output_dir())
        setup = prepared or self.prepare(scenario)
        with run_context(scenario=scenario.name):
            result = setup.sweep()
            path = SweepCSVAdapter(target / SWEEP_NAME).write(result)
            summary = RunSummary(
                scenario=scenario.name, files=[path], details=describe_sweep(result)
            )
            if scenario.output.plot:
                summary.files.append(
                    plot_sweep(result, target / "sweep.svg", q_true=setup.mode.q)
                )
            logger.info("runner.sweep.written", path=str(path), points=len(result))
        return summary

    def run_preset(
        self,
        name: str,
        *,
        out_dir: Path | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> RunSummary:
        """Emit a preset's full bundle into ``<out_dir>/<preset>``.

        The bundle holds raw and normalised spectra for every pump rate, the sweep
        summary and a manifest from which ``spectrum`` reproduces the raw CSVs.
        """

        scenario = self.load_preset(name)
        if overrides:
            scenario = scenario.with_overrides(**overrides)
        base = Path(out_dir or settings.output_dir) / scenario.name
        scenario = scenario.with_overrides(out=base).resolved()

        with run_context(preset=scenario.name):
            prepared = self.prepare(scenario)
            spectra = self.run_spectrum(scenario, normalized=True, prepared=prepared)
            sweep = self.run_sweep(scenario, prepared=prepared)
            manifest = atomic_write_text(base / MANIFEST_NAME, scenario.to_yaml())
            logger.info("runner.preset.completed", directory=str(base))

        return RunSummary(
            scenario=scenario.name,
            files=[*spectra.files, *sweep.files, manifest],
            details={"directory": str(base), **sweep.details},
        )


__all__ = [
    "MANIFEST_NAME",
    "PreparedScenario",
    "RunSummary",
    "SWEEP_NAME",
    "ScenarioRunner",
    "spectrum_filename",
]
