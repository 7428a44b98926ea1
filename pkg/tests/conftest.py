import sys
from pathlib import Path
from typing import Any

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from purcell_pl.config import settings  # noqa: E402
from purcell_pl.physics.cavity import CavityMode, FieldProfile  # noqa: E402
from purcell_pl.physics.ensemble import EnsembleConfig  # noqa: E402


@pytest.fixture()
def hi_q_mode() -> CavityMode:
    return CavityMode(q=15000.0, fp=189.0)


@pytest.fixture()
def lo_q_mode() -> CavityMode:
    return CavityMode(q=2300.0, fp=28.0)


@pytest.fixture()
def point_dot_mode() -> CavityMode:
    return CavityMode(q=2300.0, fp=28.0, profile=FieldProfile.POINT_DOT)


@pytest.fixture()
def small_quadrature() -> EnsembleConfig:
    return EnsembleConfig(radial_order=6, binding_order=3)


@pytest.fixture()
def cheap_scenario() -> dict[str, Any]:
    """Scenario document small enough for CLI round trips."""

    return {
        "name": "cheap",
        "cavity": {"q": 2300.0, "fp": 28.0},
        "ensemble": {"radial_order": 4, "binding_order": 3},
        "collection": {"a": 1.0, "b": 0.0},
        "pump": {"powers": [0.01, 1000.0]},
    }


@pytest.fixture()
def isolated_output(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    out = tmp_path / "output"
    monkeypatch.setattr(settings, "output_dir", out)
    return out
