from __future__ import annotations

import pytest

from purcell_pl.acceptance import AcceptanceSuite, CriterionResult, point_dot_fwhm


pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def suite() -> AcceptanceSuite:
    return AcceptanceSuite()


def assert_passed(result: CriterionResult) -> None:
    assert result.passed, f"criterion {result.number} ({result.title}): {result.describe()}"


def test_point_dot_law(suite: AcceptanceSuite) -> None:
    assert_passed(suite.point_dot_law())


def test_point_dot_helper_reports_prediction() -> None:
    measured, predicted = point_dot_fwhm(2300.0, 28.0, 1.0)

    assert predicted == pytest.approx(1300.0 / 2300.0 * 29.0**0.5)
    assert measured == pytest.approx(predicted, rel=0.01)


def test_effective_purcell_calibration(suite: AcceptanceSuite) -> None:
    result = suite.effective_purcell_calibration()

    assert_passed(result)
    assert 3 <= result.measured["fp_ratio"] <= 4.5


def test_measured_q_endpoints(suite: AcceptanceSuite) -> None:
    result = suite.measured_q_endpoints()

    assert_passed(result)
    assert result.measured["points"] == 25


def test_high_power_convergence(suite: AcceptanceSuite) -> None:
    assert_passed(suite.high_power_convergence())


def test_steady_state_oracle(suite: AcceptanceSuite) -> None:
    assert_passed(suite.steady_state_oracle())


def test_photon_conservation(suite: AcceptanceSuite) -> None:
    assert_passed(suite.photon_conservation())


def test_all_photon_flatness(suite: AcceptanceSuite) -> None:
    result = suite.all_photon_flatness()

    assert_passed(result)
    assert result.measured["reference_bound"] == 1.01
    assert result.measured["max_min_P0.01"] < result.measured["checked_bound"]
    if result.measured["max_min_P0.01"] >= 1.01:
        assert result.status == "DEVIATION"
        assert "1.01" in result.deviation


def test_leaky_dip(suite: AcceptanceSuite) -> None:
    assert_passed(suite.leaky_dip())


def test_mixed_collection_crossover(suite: AcceptanceSuite) -> None:
    assert_passed(suite.mixed_collection_crossover())


def test_purcell_round_trip(suite: AcceptanceSuite) -> None:
    result = suite.purcell_round_trip()

    assert_passed(result)
    assert result.measured["fp_at_Q15000"] == pytest.approx(182.6, abs=0.5)


def test_run_reports_every_criterion_in_order(suite: AcceptanceSuite) -> None:
    results = suite.run()

    assert [result.number for result in results] == list(range(1, 11))
    assert all(result.passed for result in results)
