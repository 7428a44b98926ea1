"""Scenario documents: validated YAML description of a simulation run."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np
import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..config import settings
from ..exceptions import ScenarioConfigError
from ..physics.cavity import BroadEmitterRule, CavityMode, FieldProfile, PurcellInputs
from ..physics.dynamics import BiexcitonEnhancement
from ..physics.ensemble import (
    EnsembleConfig,
    EnsembleMode,
    InhomogeneousShape,
    aligned_bin_width,
)
from ..physics.spectrum import Channel, CollectionGeometry


DEFAULT_POWERS = [0.01, 0.1, 1.0, 10.0, 100.0, 1000.0]


def parse_power_grid(text: str) -> list[float]:
    """Expand ``start:stop:log|lin:count`` into an ascending list of pump rates."""

    parts = [part.strip() for part in str(text).split(":")]
    if len(parts) != 4:
        raise ValueError(f"Power grid '{text}' must look like start:stop:log|lin:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[3])
    except ValueError as exc:
        raise ValueError(f"Power grid '{text}' has a non-numeric field") from exc
    scale = parts[2].lower()
    if scale not in {"log", "lin"}:
        raise ValueError(f"Power grid scale must be 'log' or 'lin', got '{parts[2]}'")
    if count < 1:
        raise ValueError("Power grid count must be >= 1")
    if start < 0:
        raise ValueError("Power grid start must be >= 0")
    if count == 1:
        return [start]
    if not stop > start:
        raise ValueError("Power grid stop must exceed start")
    if scale == "log":
        if not start > 0:
            raise ValueError("A logarithmic power grid needs start > 0")
        values = np.geomspace(start, stop, count)
    else:
        values = np.linspace(start, stop, count)
    return [float(value) for value in values]


def parse_collection(text: str) -> dict[str, float]:
    """Parse ``A=x,B=y`` (either key optional) into a collection mapping."""

    values: dict[str, float] = {}
    for item in str(text).split(","):
        if not item.strip():
            continue
        key, sep, raw = item.partition("=")
        key = key.strip().lower()
        if not sep or key not in {"a", "b"}:
            raise ValueError(f"Collection entry '{item.strip()}' must be A=<x> or B=<y>")
        try:
            values[key] = float(raw)
        except ValueError as exc:
            raise ValueError(f"Collection value '{raw.strip()}' is not a number") from exc
    if not values:
        raise ValueError("Collection must set A and/or B")
    return values


class CavitySection(BaseModel):
    """Mode parameters; ``fp`` may be omitted when (v_eff, lambda_vac, n_index) are given."""

    model_config = ConfigDict(extra="forbid")

    e0: float = Field(default=1300.0, gt=0, description="Mode resonance energy (meV)")
    q: float = Field(default=15000.0, gt=0, description="Cavity quality factor")
    fp: float | None = Field(default=189.0, ge=0, description="Purcell factor")
    v_eff: float | None = Field(default=None, gt=0, description="Mode volume (µm³)")
    lambda_vac: float | None = Field(
        default=None, gt=0, description="Vacuum wavelength (nm)"
    )
    n_index: float = Field(default=3.5, gt=0, description="Refractive index")
    gamma_leak: float = Field(
        default=1.0, gt=0, le=1, description="Leaky-mode rate factor γ"
    )
    radius: float = Field(default=0.5, gt=0, description="Pillar radius (µm)")
    profile: FieldProfile = FieldProfile.BESSEL_TRUNCATED
    emitter_linewidth: float = Field(
        default=0.0, ge=0, description="Dot emission linewidth (meV), 0 for narrow lines"
    )
    broad_emitter: BroadEmitterRule = BroadEmitterRule.SUBSTITUTION

    @model_validator(mode="after")
    def _purcell_source(self) -> "CavitySection":
        if self.fp is None and (self.v_eff is None or self.lambda_vac is None):
            raise ValueError("Set fp, or both v_eff and lambda_vac to compute it")
        return self

    def to_mode(self) -> CavityMode:
        options = {
            "gamma_leak": self.gamma_leak,
            "radius": self.radius,
            "profile": self.profile,
            "emitter_linewidth": self.emitter_linewidth,
            "broad_emitter": self.broad_emitter,
        }
        if self.fp is not None:
            return CavityMode(e0=self.e0, q=self.q, fp=self.fp, **options)
        assert self.v_eff is not None and self.lambda_vac is not None
        inputs = PurcellInputs(
            q=self.q, v_eff=self.v_eff, lambda_vac=self.lambda_vac, n_index=self.n_index
        )
        return CavityMode.from_purcell_inputs(inputs, e0=self.e0, **options)


class EnsembleSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: EnsembleMode = EnsembleMode.QUADRATURE
    n_dots: int = Field(default=100_000, ge=1)
    window: float = Field(default=20.0, gt=0, description="Exciton window width (meV)")
    center: float | None = Field(
        default=None, description="Window centre (meV); defaults to the mode energy"
    )
    binding_mean: float = Field(default=3.0, description="Biexciton binding energy (meV)")
    binding_fwhm: float = Field(default=0.6, ge=0)
    radial_order: int = Field(default=24, ge=1)
    energy_order: int | None = Field(default=None, ge=1)
    binding_order: int = Field(default=5, ge=1)
    inhomogeneous: InhomogeneousShape = InhomogeneousShape.UNIFORM
    inhomogeneous_fwhm: float = Field(default=20.0, gt=0)
    biexciton_enhancement: BiexcitonEnhancement = BiexcitonEnhancement.BIEXCITON
    bin_width: float | None = Field(
        default=None,
        gt=0,
        description="Spectral bin (meV); defaults to the quadrature node spacing",
    )


class CollectionSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    a: float = Field(default=1.0, ge=0, le=1, description="Mode photon efficiency A")
    b: float = Field(default=0.0, ge=0, le=1, description="Leaky photon efficiency B")

    @model_validator(mode="after")
    def _not_blind(self) -> "CollectionSection":
        if self.a == 0 and self.b == 0:
            raise ValueError("A and B cannot both be zero")
        return self

    def to_geometry(self) -> CollectionGeometry:
        return CollectionGeometry(a=self.a, b=self.b)


class PumpSection(BaseModel):
    """Pump rates in units of Γ0.

    ``power`` restricts spectra to one rate; ``grid`` overrides the sweep rates.
    """

    model_config = ConfigDict(extra="forbid")

    power: float | None = Field(default=None, ge=0)
    powers: list[float] = Field(default_factory=lambda: list(DEFAULT_POWERS))
    grid: str | None = Field(default=None, description="start:stop:log|lin:count")
    channel: Channel = Channel.MODE

    @field_validator("powers")
    @classmethod
    def _ascending(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("At least one pump rate is required")
        if any(p < 0 for p in value):
            raise ValueError("Pump rates must be >= 0")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("Pump rates must be strictly ascending")
        return value

    @field_validator("grid")
    @classmethod
    def _grid(cls, value: str | None) -> str | None:
        if value is not None:
            parse_power_grid(value)
        return value

    def spectrum_powers(self) -> list[float]:
        return [self.power] if self.power is not None else list(self.powers)

    def sweep_powers(self) -> list[float]:
        return parse_power_grid(self.grid) if self.grid else self.spectrum_powers()


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: Path | None = None
    prefix: str = Field(default="spectrum", min_length=1)
    plot: bool = False
    smoothing: float = Field(
        default=0.0, ge=0, description="Display-only Lorentzian width for plots (meV)"
    )


class Scenario(BaseModel):
    """A complete, self-consistent simulation run."""

    model_config = ConfigDict(extra="forbid")

    name: str = "custom"
    description: str = ""
    seed: int | None = None
    cavity: CavitySection = Field(default_factory=CavitySection)
    ensemble: EnsembleSection = Field(default_factory=EnsembleSection)
    collection: CollectionSection = Field(default_factory=CollectionSection)
    pump: PumpSection = Field(default_factory=PumpSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @model_validator(mode="after")
    def _consistent(self) -> "Scenario":
        mode = self.cavity.to_mode()
        self.to_ensemble_config().validate(mode)
        width = self.bin_width(mode)
        if width > mode.fwhm / 10.0 * (1 + 1e-12):
            raise ValueError(
                f"bin_width {width:.4g} meV exceeds a tenth of the mode linewidth"
            )
        return self

    def to_mode(self) -> CavityMode:
        return self.cavity.to_mode().with_(label=self.name)

    def to_ensemble_config(self) -> EnsembleConfig:
        section = self.ensemble
        return EnsembleConfig(
            mode=section.mode,
            n_dots=section.n_dots,
            window=section.window,
            center=section.center,
            binding_mean=section.binding_mean,
            binding_fwhm=section.binding_fwhm,
            seed=self.seed if self.seed is not None else settings.default_seed,
            radial_order=section.radial_order,
            energy_order=section.energy_order,
            binding_order=section.binding_order,
            inhomogeneous=section.inhomogeneous,
            inhomogeneous_fwhm=section.inhomogeneous_fwhm,
        )

    def to_geometry(self) -> CollectionGeometry:
        return self.collection.to_geometry()

    def bin_width(self, mode: CavityMode | None = None) -> float:
        cavity = mode or self.cavity.to_mode()
        if self.ensemble.bin_width is not None:
            return self.ensemble.bin_width
        if self.ensemble.mode is EnsembleMode.QUADRATURE:
            return aligned_bin_width(self.to_ensemble_config(), cavity)
        return cavity.fwhm / 20.0

    def output_dir(self) -> Path:
        return Path(self.output.dir) if self.output.dir else settings.output_dir

    def resolved(self) -> "Scenario":
        """Copy with every run-time default written out, suitable for a manifest."""

        return self.with_overrides(
            seed=self.seed if self.seed is not None else settings.default_seed,
            out=self.output_dir(),
        )

    def with_overrides(
        self,
        *,
        power: float | None = None,
        powers: str | None = None,
        collection: str | None = None,
        seed: int | None = None,
        out: Path | None = None,
        plot: bool | None = None,
        channel: Channel | str | None = None,
    ) -> "Scenario":
        """Return a re-validated copy with command-line overrides applied."""

        data = self.model_dump(mode="python")
        if power is not None:
            data["pump"]["power"] = power
        if powers is not None:
            data["pump"]["grid"] = powers
        if channel is not None:
            data["pump"]["channel"] = channel
        if seed is not None:
            data["seed"] = seed
        if out is not None:
            data["output"]["dir"] = Path(out)
        if plot is not None:
            data["output"]["plot"] = plot
        try:
            if collection is not None:
                data["collection"].update(parse_collection(collection))
        except ValueError as exc:
            raise ScenarioConfigError("Invalid --collection", [f"collection: {exc}"]) from exc
        return validate_scenario(data)

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(mode="json"), sort_keys=False)


def _field_errors(exc: ValidationError) -> list[str]:
    errors = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"]) or "scenario"
        errors.append(f"{location}: {error['msg']}")
    return errors


def validate_scenario(data: dict[str, Any]) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        raise ScenarioConfigError("Invalid scenario", _field_errors(exc)) from exc


def load_scenario(path: Path) -> Scenario:
    """Read and validate a scenario YAML file."""

    source = Path(path)
    if not source.exists():
        raise ScenarioConfigError(f"Scenario file not found: {source}")
    try:
        with source.open("r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except yaml.YAMLError as exc:
        raise ScenarioConfigError(f"Scenario file {source} is not valid YAML: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioConfigError(f"Scenario file {source} must contain a mapping")
    data.setdefault("name", source.stem)
    return validate_scenario(data)


__all__ = [
    "CavitySection",
    "CollectionSection",
    "DEFAULT_POWERS",
    "EnsembleSection",
    "OutputSection",
    "PumpSection",
    "Scenario",
    "load_scenario",
    "parse_collection",
    "parse_power_grid",
    "validate_scenario",
]
