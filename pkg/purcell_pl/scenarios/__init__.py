"""Scenario documents, packaged figure presets and the runner that executes them."""

from .models import (
    Scenario,
    load_scenario,
    parse_collection,
    parse_power_grid,
    validate_scenario,
)
from .runner import PreparedScenario, RunSummary, ScenarioRunner

__all__ = [
    "PreparedScenario",
    "RunSummary",
    "Scenario",
    "ScenarioRunner",
    "load_scenario",
    "parse_collection",
    "parse_power_grid",
    "validate_scenario",
]
