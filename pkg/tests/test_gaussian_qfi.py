import numpy as np
import pytest

from metroStretch import ParamFamilyCV
from metroStretch.gaussian_tools import (
    ChoiLimitReport,
    bk_error_lower_bound,
    bures_qfi_bound,
    cv_closed_form_qfi,
    output_error_bound,
    qfi_choi_limit,
    qfi_gaussian,
    qfi_moments,
    qfi_suboptimal,
    thermal,
)


def test_qfi_gaussian_examples():
    assert qfi_gaussian("thermal_loss", 1.0, r=3, eta=0.5).value == pytest.approx(0.5, rel=2e-2)
    assert qfi_gaussian("additive", 0.5, r=3).value == pytest.approx(4.0, rel=2e-2)


def test_theta_independent_family_has_zero_qfi():
    # at eta = 1 the thermal-loss channel is the identity for every nbar
    family = ParamFamilyCV("thermal_loss", eta=1.0)
    assert qfi_gaussian(family, 1.0, r=2).value == pytest.approx(0.0, abs=1e-6)


def test_routes_agree():
    for kind, theta in [("thermal_loss", 1.0), ("amplifier", 0.5), ("additive", 0.7)]:
        by_fid = qfi_gaussian(kind, theta, r=1.0).value
        by_moments = qfi_gaussian(kind, theta, r=1.0, route="moments").value
        assert by_moments == pytest.approx(by_fid, rel=1e-3)


def test_moments_route_on_thermal_states():
    for nbar in (0.5, 1.0, 3.0):
        res = qfi_moments(thermal, nbar, 1e-4)
        assert res.value == pytest.approx(1.0 / (nbar * (nbar + 1.0)), rel=1e-6)


def test_unknown_route_and_bad_arguments():
    with pytest.raises(ValueError):
        qfi_gaussian("thermal_loss", 1.0, r=1.0, route="sld")
    with pytest.raises(ValueError):
        qfi_gaussian("thermal_loss", 1.0, r=-1.0)
    with pytest.raises(ValueError):
        qfi_gaussian("thermal_loss", 0.0, r=1.0)


def test_qfi_increases_with_squeezing():
    for kind in ("thermal_loss", "amplifier"):
        values = [qfi_gaussian(kind, 1.0, r=r).value for r in (0.5, 1.0, 1.5, 2.0, 3.0)]
        assert all(b >= a for a, b in zip(values, values[1:]))


def test_choi_limit_examples():
    report = qfi_choi_limit("thermal_loss", 1.0, [1, 2, 3])
    assert isinstance(report, ChoiLimitReport)
    assert report.monotone
    assert report.value == pytest.approx(0.5, rel=1e-2)
    assert qfi_choi_limit("thermal_loss", 2.0, [1, 2, 3]).value == pytest.approx(1.0 / 6.0, rel=2e-2)
    assert qfi_choi_limit("additive", 1.0, [1, 2, 3]).value == pytest.approx(1.0, rel=2e-2)


def test_choi_limit_grid_checks():
    with pytest.raises(ValueError):
        qfi_choi_limit("thermal_loss", 1.0, [1, 2])
    with pytest.raises(ValueError):
        qfi_choi_limit("thermal_loss", 1.0, [1, 3, 2])


@pytest.mark.parametrize("kind", ["thermal_loss", "amplifier"])
def test_choi_limit_matches_closed_form(kind):
    for nbar in (1.0, 2.0):
        value = qfi_choi_limit(kind, nbar, [1, 2, 3]).value
        assert value == pytest.approx(cv_closed_form_qfi(kind, nbar), rel=2e-2)


def test_choi_limit_independent_of_eta():
    values = [qfi_choi_limit("thermal_loss", 1.0, [1, 2, 3], eta=eta).value for eta in (0.3, 0.6, 0.9)]
    assert max(values) / min(values) - 1 <= 1e-2


def test_suboptimal_examples():
    assert qfi_suboptimal("thermal_loss", 1.0, eta=0.6).value == pytest.approx(1.0, rel=1e-3)
    assert qfi_suboptimal("thermal_loss", 0.5, eta=0.6).value == pytest.approx(4.0, rel=1e-3)
    additive = qfi_suboptimal("additive", 0.5).value
    assert additive == pytest.approx(4.0, rel=1e-3)
    assert additive == pytest.approx(cv_closed_form_qfi("additive", 0.5), rel=1e-3)


def test_suboptimal_over_grid():
    for nbar in (0.5, 1.0, 2.0, 5.0):
        assert qfi_suboptimal("thermal_loss", nbar, eta=0.6).value == pytest.approx(nbar ** -2, rel=1e-3)
    assert qfi_suboptimal("amplifier", 1.5, eta=2.0).value == pytest.approx(1.5 ** -2, rel=1e-3)


def test_closed_forms():
    assert cv_closed_form_qfi("thermal-loss", 1.0) == pytest.approx(0.5)
    assert cv_closed_form_qfi("thermal_loss", 2.0, route="suboptimal") == pytest.approx(0.25)
    assert cv_closed_form_qfi("additive", 0.5, route="suboptimal") == pytest.approx(4.0)
    with pytest.raises(ValueError):
        cv_closed_form_qfi("thermal_loss", 0.0)
    with pytest.raises(ValueError):
        cv_closed_form_qfi("dephasing", 0.3)


def test_bk_error_examples():
    # vacuum only: additive noise 1, F = 1 / sqrt(2)
    assert bk_error_lower_bound(0.0, 0.0) == pytest.approx(2 * (1 - 1 / np.sqrt(2)), abs=1e-12)
    r = 1.0
    coherent_bound = 2 * (1 - (1 + np.exp(-2 * r)) ** -0.5)
    assert bk_error_lower_bound(r, 0.5) >= coherent_bound - 1e-12


def test_bk_error_decreases_with_squeezing():
    values = [bk_error_lower_bound(r, 1.0) for r in (0, 1, 2, 3, 4)]
    assert all(b < a for a, b in zip(values, values[1:]))
    assert values[-1] < 1e-3


def test_bk_error_rejects_negative_arguments():
    with pytest.raises(ValueError):
        bk_error_lower_bound(-1.0, 1.0)


def test_error_propagation_bounds():
    assert output_error_bound(1e-3, 10) == pytest.approx(1e-2)
    assert bures_qfi_bound(1.0, 5, 0.0, 1e-3) == 0.0
    assert bures_qfi_bound(0.99, 2, 1e-4, 0.1) > bures_qfi_bound(0.99, 2, 0.0, 0.1)
    with pytest.raises(ValueError):
        bures_qfi_bound(1.2, 1, 0.0, 0.1)


def test_choi_limit_near_unit_transmissivity():
    report = qfi_choi_limit("thermal_loss", 1.0, [1, 2, 3], eta=0.9)
    # the finite-r values are still far from the limit at r = 1
    assert report.values[0] < 0.45
    assert report.value == pytest.approx(0.5, rel=1e-2)
