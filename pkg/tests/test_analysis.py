from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from purcell_pl.exceptions import (
    AmbiguityError,
    AnalysisError,
    ConfigError,
    DomainError,
    RangeError,
    SweepError,
)
from purcell_pl.physics.analysis import (
    SweepResult,
    analyse_spectrum,
    describe_sweep,
    dip_contrast,
    effective_purcell,
    flatness,
    forward_broadening,
    peak_fwhm,
    power_sweep,
)
from purcell_pl.physics.cavity import CavityMode, FieldProfile
from purcell_pl.physics.ensemble import EnsembleConfig, aligned_bin_width, quadrature_ensemble
from purcell_pl.physics.spectrum import Channel, CollectionGeometry, SpectralGrid, synthesize


def lorentzian_line(q: float, e0: float = 1300.0, shift: float = 0.0):
    fwhm = e0 / q
    grid = SpectralGrid(center=e0, bin_width=fwhm / 20, k_min=-400, k_max=400)
    centre = e0 + shift * grid.bin_width
    curve = 1.0 / (1.0 + (2.0 * (grid.energies - centre) / fwhm) ** 2)
    return grid, curve, centre


def small_sweep_inputs(mode: CavityMode):
    cfg = EnsembleConfig(radial_order=4, binding_order=3)
    dots = quadrature_ensemble(cfg, mode)
    grid = SpectralGrid.covering(dots, mode, aligned_bin_width(cfg, mode))
    return dots, grid


def test_peak_fwhm_recovers_lorentzian_q() -> None:
    grid, curve, _ = lorentzian_line(13000.0)

    report = peak_fwhm(curve, grid)

    assert report.q_measured == pytest.approx(13000.0, rel=0.01)
    assert report.e_peak == pytest.approx(1300.0, abs=1e-9)
    assert report.height == pytest.approx(1.0)


@hypothesis_settings(max_examples=50)
@given(
    q=st.floats(min_value=500.0, max_value=50_000.0, allow_nan=False),
    shift=st.floats(min_value=-0.45, max_value=0.45, allow_nan=False),
)
def test_peak_fwhm_on_offset_lines(q: float, shift: float) -> None:
    grid, curve, centre = lorentzian_line(q, shift=shift)

    report = peak_fwhm(curve, grid)

    assert report.q_measured == pytest.approx(q, rel=0.01)
    assert abs(report.e_peak - centre) < 0.05 * grid.bin_width


def test_peak_fwhm_accepts_plain_energy_axis() -> None:
    grid, curve, _ = lorentzian_line(2300.0)

    from_grid = peak_fwhm(curve, grid)
    from_axis = peak_fwhm(curve, grid.energies)

    assert from_axis.fwhm == pytest.approx(from_grid.fwhm, rel=1e-12)


def test_maximum_at_edge_is_a_range_error() -> None:
    energies = np.linspace(1299.0, 1301.0, 5)

    with pytest.raises(RangeError):
        peak_fwhm(np.array([1.0, 0.6, 0.3, 0.2, 0.1]), energies)


def test_half_maximum_beyond_edge_is_a_range_error() -> None:
    energies = np.linspace(1299.0, 1301.0, 5)

    with pytest.raises(RangeError):
        peak_fwhm(np.array([0.6, 0.8, 1.0, 0.8, 0.6]), energies)


def test_equal_maxima_are_ambiguous() -> None:
    energies = np.linspace(1299.0, 1301.0, 6)

    with pytest.raises(AmbiguityError):
        peak_fwhm(np.array([0.0, 0.4, 1.0, 1.0, 0.4, 0.0]), energies)


def test_mismatched_axis_is_rejected() -> None:
    with pytest.raises(AnalysisError):
        peak_fwhm(np.ones(4), np.linspace(0.0, 1.0, 5))


def test_effective_purcell_reference_values() -> None:
    assert effective_purcell(2300.0, 742.0) == pytest.approx(8.6, abs=0.05)
    assert effective_purcell(15000.0, 2200.0) == pytest.approx(45.5, abs=0.1)
    assert effective_purcell(2.0, 1.0, gamma_leak=0.5) == pytest.approx(1.5)


@pytest.mark.parametrize(("q_true", "q_meas"), [(2300.0, 2300.0), (2300.0, 2500.0)])
def test_effective_purcell_needs_broadening(q_true: float, q_meas: float) -> None:
    with pytest.raises(DomainError):
        effective_purcell(q_true, q_meas)


@given(
    fp=st.floats(min_value=0.1, max_value=1000.0, allow_nan=False),
    q_true=st.floats(min_value=100.0, max_value=100_000.0, allow_nan=False),
)
def test_effective_purcell_inverts_forward_broadening(fp: float, q_true: float) -> None:
    q_meas = forward_broadening(q_true, fp)

    assert effective_purcell(q_true, q_meas) == pytest.approx(fp, rel=1e-9)


def test_dip_contrast_of_flat_curve_is_zero() -> None:
    mode = CavityMode(q=2300.0, fp=28.0)
    energies = np.linspace(1290.0, 1310.0, 2001)

    assert dip_contrast(np.ones_like(energies), energies, mode) == 0.0


def test_dip_contrast_reference_window_must_fit() -> None:
    mode = CavityMode(q=2300.0, fp=28.0)
    energies = np.linspace(1299.0, 1301.0, 201)

    with pytest.raises(RangeError):
        dip_contrast(np.ones_like(energies), energies, mode)


def test_dip_contrast_rejects_dark_reference() -> None:
    mode = CavityMode(q=2300.0, fp=28.0)
    energies = np.linspace(1290.0, 1310.0, 2001)

    with pytest.raises(AnalysisError):
        dip_contrast(np.zeros_like(energies), energies, mode)


def test_point_dot_leaky_channel_dip() -> None:
    mode = CavityMode(q=15000.0, fp=189.0, profile=FieldProfile.POINT_DOT)
    cfg = EnsembleConfig(binding_order=1)
    dots = quadrature_ensemble(cfg, mode)
    grid = SpectralGrid.covering(dots, mode, aligned_bin_width(cfg, mode))
    spectrum = synthesize(dots, mode, 0.01, grid)

    contrast = dip_contrast(spectrum.i_b, grid, mode)

    assert contrast == pytest.approx(189.0 / 190.0, abs=0.005)


def test_mode_channel_shows_a_peak(lo_q_mode: CavityMode) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)
    spectrum = synthesize(dots, lo_q_mode, 0.01, grid)

    assert dip_contrast(spectrum.i_a, grid, lo_q_mode) < 0


def test_flatness_of_constant_curve() -> None:
    energies = np.linspace(1290.0, 1310.0, 2001)
    curve = np.ones_like(energies)
    curve[1000] = 1.01

    assert flatness(curve, energies, 1300.0) == pytest.approx(1.01)
    with pytest.raises(RangeError):
        flatness(curve, energies, 1300.0, half_span=20.0)


def test_analyse_spectrum_reports_peak_and_dip(lo_q_mode: CavityMode) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)
    spectrum = synthesize(dots, lo_q_mode, 0.01, grid)

    analysis = analyse_spectrum(spectrum, lo_q_mode, CollectionGeometry(a=1.0, b=1.0))

    assert analysis.p == 0.01
    assert analysis.channel is Channel.MODE
    assert analysis.peak is not None
    assert analysis.peak.q_measured < lo_q_mode.q
    assert analysis.dip_contrast is not None


def test_power_sweep_rows_follow_input_order(lo_q_mode: CavityMode) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)
    powers = [0.01, 1.0, 100.0, 1000.0]

    result = power_sweep(dots, lo_q_mode, powers, bins=grid)

    assert result.powers.tolist() == powers
    assert result.channel is Channel.MODE
    assert np.all(result.q_measured < lo_q_mode.q * 1.01)
    assert result.q_measured[-1] > result.q_measured[0]
    assert result.at(100.0).p == 100.0
    with pytest.raises(KeyError):
        result.at(5.0)


def test_power_sweep_is_independent_of_worker_count(lo_q_mode: CavityMode) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)
    powers = [0.01, 0.1, 10.0]

    serial = power_sweep(dots, lo_q_mode, powers, bins=grid, max_workers=1)
    pooled = power_sweep(dots, lo_q_mode, powers, bins=grid, max_workers=4)

    assert serial.rows == pooled.rows


@pytest.mark.parametrize(
    ("powers", "error"),
    [([], ConfigError), ([1.0, 0.1], ConfigError), ([1.0, 1.0], ConfigError), ([-1.0], DomainError)],
)
def test_power_sweep_validates_powers(
    lo_q_mode: CavityMode, powers: list[float], error: type[Exception]
) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)

    with pytest.raises(error):
        power_sweep(dots, lo_q_mode, powers, bins=grid)


def test_power_sweep_attaches_failing_power(lo_q_mode: CavityMode) -> None:
    dots, _ = small_sweep_inputs(lo_q_mode)
    coarse = SpectralGrid.covering(dots, lo_q_mode, lo_q_mode.fwhm / 5)

    with pytest.raises(SweepError) as excinfo:
        power_sweep(dots, lo_q_mode, [0.5], bins=coarse)

    assert excinfo.value.power == 0.5
    assert isinstance(excinfo.value.original_error, ConfigError)


def test_sweep_result_frame_round_trip(lo_q_mode: CavityMode) -> None:
    dots, grid = small_sweep_inputs(lo_q_mode)
    result = power_sweep(dots, lo_q_mode, [0.01, 1000.0], bins=grid)

    frame = result.to_frame()
    restored = SweepResult.from_frame(frame)

    assert list(frame.columns) == [
        "power_gamma0",
        "q_measured",
        "e_peak_meV",
        "fwhm_meV",
        "dip_contrast",
    ]
    assert restored.rows == result.rows
    assert describe_sweep(result)["points"] == 2
    with pytest.raises(ConfigError):
        SweepResult.from_frame(frame.drop(columns=["dip_contrast"]))
