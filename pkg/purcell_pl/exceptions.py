"""Exception hierarchy shared by the simulator, the analysis layer and the CLI."""

from __future__ import annotations


class PurcellPLError(RuntimeError):
    """Base exception raised by purcell-pl."""


class DomainError(PurcellPLError, ValueError):
    """Raised when a physical input lies outside the domain of an operation."""


class ConfigError(PurcellPLError, ValueError):
    """Raised when an ensemble or scenario configuration is inconsistent."""


class ScenarioConfigError(ConfigError):
    """Raised when a scenario document fails validation.

    ``field_errors`` holds one ``"<location>: <message>"`` entry per field.
    """

    def __init__(self, message: str, field_errors: list[str] | None = None) -> None:
        self.field_errors = list(field_errors or [])
        detail = "; ".join(self.field_errors)
        super().__init__(f"{message}: {detail}" if detail else message)


class PresetNotFoundError(ConfigError):
    """Raised when a preset name does not match any packaged scenario."""

    def __init__(self, name: str, available: list[str]) -> None:
        super().__init__(
            f"Unknown preset '{name}'. Valid presets: {', '.join(available) or '(none)'}"
        )
        self.name = name
        self.available = list(available)


class IntegrationError(PurcellPLError):
    """Raised when the fixed-step integrator leaves the probability simplex."""


class AccumulationError(PurcellPLError):
    """Raised when a transition line does not fall inside the spectral grid."""

    def __init__(self, energy: float, low: float, high: float) -> None:
        super().__init__(
            f"Line at {energy:.6f} meV lies outside the grid [{low:.6f}, {high:.6f}] meV"
        )
        self.energy = energy


class AnalysisError(PurcellPLError):
    """Base class for failures while extracting observables from a spectrum."""


class RangeError(AnalysisError):
    """Raised when a feature or reference window touches the edge of the grid."""


class AmbiguityError(AnalysisError):
    """Raised when a curve has several bins sharing the global maximum."""


class SweepError(AnalysisError):
    """Raised when one evaluation of a power sweep fails."""

    def __init__(self, power: float, error: Exception) -> None:
        super().__init__(f"Sweep failed at P = {power:g} Γ0: {error}")
        self.power = power
        self.original_error = error


class OutputError(PurcellPLError, OSError):
    """Raised when an output artefact cannot be written."""


__all__ = [
    "AccumulationError",
    "AmbiguityError",
    "AnalysisError",
    "ConfigError",
    "DomainError",
    "IntegrationError",
    "OutputError",
    "PresetNotFoundError",
    "PurcellPLError",
    "RangeError",
    "ScenarioConfigError",
    "SweepError",
]
