from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np
import pytest
import yaml

from purcell_pl.config import settings
from purcell_pl.exceptions import PresetNotFoundError, ScenarioConfigError
from purcell_pl.physics.cavity import BroadEmitterRule, FieldProfile
from purcell_pl.physics.ensemble import EnsembleMode, aligned_bin_width
from purcell_pl.physics.spectrum import Channel
from purcell_pl.scenarios import (
    Scenario,
    ScenarioRunner,
    load_scenario,
    parse_collection,
    parse_power_grid,
    validate_scenario,
)
from purcell_pl.scenarios.runner import MANIFEST_NAME, SWEEP_NAME


PRESETS = ["fig1", "fig2-hiQ", "fig2-loQ", "fig3", "fig4", "fig5"]


def write_yaml(path: Path, data: Any) -> Path:
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return path


def test_log_power_grid() -> None:
    values = parse_power_grid("0.01:1000:log:25")

    assert len(values) == 25
    assert values[0] == pytest.approx(0.01)
    assert values[-1] == pytest.approx(1000.0)
    assert np.allclose(np.diff(np.log10(values)), 5 / 24)


def test_linear_power_grid() -> None:
    assert parse_power_grid("0:10:lin:3") == [0.0, 5.0, 10.0]
    assert parse_power_grid("2.5:10:lin:1") == [2.5]


@pytest.mark.parametrize(
    "text",
    ["1:10:log", "a:10:log:3", "1:10:cubic:3", "1:10:log:0", "0:10:log:3", "10:1:lin:3", "-1:1:lin:3"],
)
def test_invalid_power_grids(text: str) -> None:
    with pytest.raises(ValueError):
        parse_power_grid(text)


def test_parse_collection() -> None:
    assert parse_collection("A=0.1,B=1") == {"a": 0.1, "b": 1.0}
    assert parse_collection("b=0.5") == {"b": 0.5}
    with pytest.raises(ValueError):
        parse_collection("C=1")
    with pytest.raises(ValueError):
        parse_collection("A=high")
    with pytest.raises(ValueError):
        parse_collection("")


def test_default_scenario_matches_high_q_pillar() -> None:
    scenario = Scenario()
    mode = scenario.to_mode()

    assert mode.q == 15000.0
    assert mode.fp == 189.0
    assert mode.profile is FieldProfile.BESSEL_TRUNCATED
    assert scenario.ensemble.mode is EnsembleMode.QUADRATURE
    assert scenario.pump.channel is Channel.MODE
    assert scenario.bin_width(mode) == aligned_bin_width(scenario.to_ensemble_config(), mode)


def test_purcell_factor_computed_from_mode_volume() -> None:
    scenario = validate_scenario(
        {"cavity": {"q": 2300.0, "fp": None, "v_eff": 0.1264, "lambda_vac": 953.7}}
    )

    assert scenario.to_mode().fp == pytest.approx(28.0, rel=5e-3)


def test_broad_emitter_rule_reaches_the_mode() -> None:
    default = validate_scenario({"cavity": {"emitter_linewidth": 5.0}})
    harmonic = validate_scenario(
        {"cavity": {"emitter_linewidth": 5.0, "broad_emitter": "harmonic"}}
    )

    assert default.to_mode().broad_emitter is BroadEmitterRule.SUBSTITUTION
    assert harmonic.to_mode().broad_emitter is BroadEmitterRule.HARMONIC
    assert harmonic.to_mode().effective_fp < default.to_mode().effective_fp
    assert "broad_emitter: harmonic" in harmonic.to_yaml()

    with pytest.raises(ScenarioConfigError) as excinfo:
        validate_scenario({"cavity": {"broad_emitter": "geometric"}})
    assert "cavity.broad_emitter" in str(excinfo.value)


def test_missing_purcell_source_is_rejected() -> None:
    with pytest.raises(ScenarioConfigError) as excinfo:
        validate_scenario({"cavity": {"fp": None, "v_eff": 0.12}})

    assert any(entry.startswith("cavity") for entry in excinfo.value.field_errors)


@pytest.mark.parametrize(
    ("data", "location"),
    [
        ({"cavity": {"q": -5.0}}, "cavity.q"),
        ({"collection": {"a": 0.0, "b": 0.0}}, "collection"),
        ({"collection": {"a": 1.2}}, "collection.a"),
        ({"pump": {"powers": [1.0, 0.1]}}, "pump.powers"),
        ({"pump": {"grid": "1:10:sqrt:4"}}, "pump.grid"),
        ({"ensemble": {"radial_order": 0}}, "ensemble.radial_order"),
        ({"unknown": 1}, "unknown"),
    ],
)
def test_validation_errors_name_the_field(data: dict, location: str) -> None:
    with pytest.raises(ScenarioConfigError) as excinfo:
        validate_scenario(data)

    assert any(entry.startswith(location) for entry in excinfo.value.field_errors)


def test_window_narrower_than_mode_is_rejected() -> None:
    with pytest.raises(ScenarioConfigError, match="narrower"):
        validate_scenario({"cavity": {"q": 2300.0, "fp": 28.0}, "ensemble": {"window": 5.0}})


def test_coarse_bin_width_is_rejected() -> None:
    with pytest.raises(ScenarioConfigError, match="bin_width"):
        validate_scenario({"ensemble": {"bin_width": 0.05}})


def test_monte_carlo_bin_width_defaults_to_twentieth_of_linewidth() -> None:
    scenario = validate_scenario({"ensemble": {"mode": "monte_carlo", "n_dots": 1000}})
    mode = scenario.to_mode()

    assert scenario.bin_width(mode) == pytest.approx(mode.fwhm / 20)


def test_load_scenario_defaults_name_to_file_stem(
    tmp_path: Path, cheap_scenario: dict[str, Any]
) -> None:
    del cheap_scenario["name"]
    path = write_yaml(tmp_path / "pillar.yaml", cheap_scenario)

    scenario = load_scenario(path)

    assert scenario.name == "pillar"
    assert scenario.pump.spectrum_powers() == [0.01, 1000.0]


def test_load_scenario_reports_missing_file(tmp_path: Path) -> None:
    with pytest.raises(ScenarioConfigError, match="not found"):
        load_scenario(tmp_path / "absent.yaml")


def test_load_scenario_reports_bad_yaml(tmp_path: Path) -> None:
    path = tmp_path / "broken.yaml"
    path.write_text("cavity: [q: 1\n", encoding="utf-8")

    with pytest.raises(ScenarioConfigError, match="YAML"):
        load_scenario(path)


def test_load_scenario_requires_mapping(tmp_path: Path) -> None:
    path = write_yaml(tmp_path / "list.yaml", [1, 2, 3])

    with pytest.raises(ScenarioConfigError, match="mapping"):
        load_scenario(path)


def test_overrides_are_revalidated(cheap_scenario: dict[str, Any], tmp_path: Path) -> None:
    scenario = validate_scenario(cheap_scenario)

    changed = scenario.with_overrides(
        power=2.0, powers="1:100:log:3", collection="B=1", seed=5, out=tmp_path, plot=True
    )

    assert changed.pump.spectrum_powers() == [2.0]
    assert changed.pump.sweep_powers() == pytest.approx([1.0, 10.0, 100.0])
    assert (changed.collection.a, changed.collection.b) == (1.0, 1.0)
    assert changed.to_ensemble_config().seed == 5
    assert changed.output_dir() == tmp_path
    assert changed.output.plot is True
    assert scenario.pump.power is None
    with pytest.raises(ScenarioConfigError):
        scenario.with_overrides(collection="A=0,B=0")
    with pytest.raises(ScenarioConfigError):
        scenario.with_overrides(collection="Z=3")


def test_seed_falls_back_to_settings(cheap_scenario: dict[str, Any]) -> None:
    scenario = validate_scenario(cheap_scenario)

    assert scenario.seed is None
    assert scenario.to_ensemble_config().seed == settings.default_seed
    assert scenario.resolved().seed == settings.default_seed


def test_yaml_round_trip(cheap_scenario: dict[str, Any], tmp_path: Path) -> None:
    scenario = validate_scenario(cheap_scenario).resolved()
    path = tmp_path / "manifest.yaml"
    path.write_text(scenario.to_yaml(), encoding="utf-8")

    reloaded = load_scenario(path)

    assert reloaded == scenario


def test_all_presets_are_packaged() -> None:
    runner = ScenarioRunner()

    assert runner.list_presets() == sorted(PRESETS)


@pytest.mark.parametrize("name", PRESETS)
def test_presets_validate(name: str) -> None:
    scenario = ScenarioRunner().load_preset(name)

    assert scenario.name == name
    assert scenario.ensemble.mode is EnsembleMode.QUADRATURE
    assert scenario.pump.spectrum_powers()[0] == 0.01
    assert scenario.pump.spectrum_powers()[-1] == 1000.0


def test_preset_collection_geometries() -> None:
    runner = ScenarioRunner()

    geometries = {
        name: (runner.load_preset(name).collection.a, runner.load_preset(name).collection.b)
        for name in ("fig1", "fig3", "fig4", "fig5")
    }

    assert geometries == {
        "fig1": (1.0, 0.0),
        "fig3": (0.0, 1.0),
        "fig4": (1.0, 1.0),
        "fig5": (0.1, 1.0),
    }
    assert runner.load_preset("fig2-loQ").cavity.q == 2300.0
    assert runner.load_preset("fig2-hiQ").pump.sweep_powers()[0] == pytest.approx(0.01)


def test_unknown_preset_lists_valid_names() -> None:
    with pytest.raises(PresetNotFoundError) as excinfo:
        ScenarioRunner().load_preset("fig9")

    assert excinfo.value.available == sorted(PRESETS)
    assert "fig2-loQ" in str(excinfo.value)


def test_prepared_scenario_grid_covers_window(cheap_scenario: dict[str, Any]) -> None:
    scenario = validate_scenario(cheap_scenario)

    prepared = ScenarioRunner().prepare(scenario)

    assert prepared.grid.center == prepared.mode.e0
    assert prepared.grid.low <= prepared.mode.e0 - 10.0
    assert prepared.grid.high >= prepared.mode.e0 + 10.0
    assert prepared.mode.label == "cheap"
    assert prepared.spectrum(0.01).pump == 0.01


@pytest.mark.slow
def test_leaky_preset_writes_its_bundle(tmp_path: Path) -> None:
    summary = ScenarioRunner().run_preset("fig3", out_dir=tmp_path)

    bundle = tmp_path / "fig3"
    names = {path.name for path in bundle.iterdir()}
    assert {MANIFEST_NAME, SWEEP_NAME, "spectrum_P0.01.csv", "spectrum_P1000_norm.csv"} <= names
    assert summary.details["directory"] == str(bundle)
    manifest = yaml.safe_load((bundle / MANIFEST_NAME).read_text(encoding="utf-8"))
    assert manifest["collection"] == {"a": 0.0, "b": 1.0}
