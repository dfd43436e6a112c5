import io
import json

import numpy as np
import pandas as pd
import pytest

from metroStretch.cli_tools import main
from metroStretch.cli_tools.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE
from metroStretch.cli_tools.config import RunConfig, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def table(text):
    return pd.read_csv(io.StringIO(text))


def test_parse_grid():
    assert parse_grid("0.1, 0.5,0.9") == [0.1, 0.5, 0.9]
    assert parse_grid("") == []
    assert parse_grid(None) == []
    with pytest.raises(ValueError):
        parse_grid("0.1,abc")


def test_run_config_defaults_and_validation():
    config = RunConfig(command="qfi-table", family="thermal-loss", grid=[1.0])
    assert config.family == "thermal_loss"
    assert config.is_cv
    config.validate()
    with pytest.raises(ValueError):
        RunConfig(command="qfi-table", family="dephasing", grid=[]).validate()
    with pytest.raises(ValueError):
        RunConfig(command="qfi-table", family="thermal_loss", grid=[1.0], r=[1.0, 2.0]).validate()
    with pytest.raises(ValueError):
        RunConfig(command="verify", suite="nope").validate()
    with pytest.raises(ValueError):
        RunConfig(command="estimate", family="thermal_loss", grid=[0.3], n=[10]).validate()
    with pytest.raises(ValueError):
        RunConfig(command="bk-error", fmt="xml").validate()


def test_ensure_seed_draws_once():
    config = RunConfig(command="verify")
    seed = config.ensure_seed()
    assert seed == config.ensure_seed()
    assert RunConfig(command="verify", seed=5).ensure_seed() == 5


def test_no_command_is_usage_error(capsys):
    code, _ = run(capsys)
    assert code == EXIT_USAGE


def test_qfi_table_dephasing(capsys):
    code, out = run(capsys, "qfi-table", "--family", "dephasing", "--p", "0.1,0.5,0.9")
    assert code == EXIT_OK
    df = table(out)
    assert list(df.columns) == ["param", "qfi_numeric", "qfi_closed", "rel_err"]
    np.testing.assert_allclose(df["qfi_closed"], [100 / 9, 4.0, 100 / 9], rtol=1e-9)
    assert (df["rel_err"] < 1e-3).all()


def test_qfi_table_fidelity_route_and_qcrb(capsys):
    code, out = run(capsys, "qfi-table", "--family", "erasure", "--p", "0.25", "--method", "fidelity", "--n", "100")
    assert code == EXIT_OK
    df = table(out)
    assert df["qfi_closed"][0] == pytest.approx(16 / 3)
    assert df["qcrb_n100"][0] == pytest.approx(3 / 1600)


def test_qfi_table_thermal_loss(capsys):
    code, out = run(capsys, "qfi-table", "--family", "thermal-loss", "--nbar", "1,2", "--r", "3")
    assert code == EXIT_OK
    df = table(out)
    np.testing.assert_allclose(df["qfi_numeric"], [0.5, 1 / 6], rtol=2e-2)
    np.testing.assert_allclose(df["qfi_closed"], [0.5, 1 / 6], rtol=1e-9)


def test_qfi_table_empty_grid(capsys):
    code, out = run(capsys, "qfi-table", "--family", "dephasing", "--p", "")
    assert code == EXIT_USAGE
    assert out == ""


def test_qfi_table_unknown_family(capsys):
    code, _ = run(capsys, "qfi-table", "--family", "squeezer", "--p", "0.5")
    assert code == EXIT_USAGE


def test_qfi_table_method_is_checked(capsys):
    assert RunConfig(command="qfi-table", family="dephasing", grid=[0.5]).method == "sld"
    assert RunConfig(command="fig-finite-qfi", grid=[1.0]).method == "numeric"
    with pytest.raises(ValueError):
        RunConfig(command="qfi-table", family="dephasing", grid=[0.5], method="numeric").validate()
    code, out = run(capsys, "qfi-table", "--family", "dephasing", "--p", "0.5", "--method", "closed")
    assert code == EXIT_USAGE
    assert out == ""


def test_verify_passes(capsys):
    code, out = run(capsys, "verify", "--seed", "1", "--trials", "10")
    assert code == EXIT_OK
    df = table(out)
    assert list(df["suite"]) == ["teleport", "resource", "covariance", "fidelity"]
    assert df["passed"].all()


@pytest.mark.parametrize("suite", ["teleport", "resource", "covariance", "fidelity"])
def test_verify_detects_injected_fault(capsys, suite):
    code, out = run(capsys, "verify", "--suite", suite, "--seed", "1", "--trials", "5", "--perturb", "1e-3")
    assert code == EXIT_FAIL
    df = table(out)
    assert not df["passed"][0]
    assert df["max_deviation"][0] > df["tolerance"][0]


def test_fig_finite_qfi_closed(capsys):
    code, out = run(capsys, "fig-finite-qfi", "--nbar", "1,2", "--method", "closed")
    assert code == EXIT_OK
    df = table(out)
    np.testing.assert_allclose(df.values, [[1.0, 0.5, 1.0], [2.0, 1 / 6, 0.25]], rtol=1e-9)


def test_fig_finite_qfi_numeric(capsys):
    code, out = run(capsys, "fig-finite-qfi", "--nbar", "1", "--eta", "0.6")
    assert code == EXIT_OK
    df = table(out)
    assert df["qfi_asymptotic"][0] == pytest.approx(0.5, rel=2e-2)
    assert df["qfi_suboptimal"][0] == pytest.approx(1.0, rel=1e-3)


def test_estimate_is_reproducible(capsys):
    argv = ["estimate", "--family", "dephasing", "--p", "0.3", "--n", "10,100,1000", "--trials", "50",
            "--seed", "7", "--format", "json"]
    code, first = run(capsys, *argv)
    assert code == EXIT_OK
    _, second = run(capsys, *argv)
    assert first == second
    report = json.loads(first)
    assert report["seed"] == 7
    assert [r["n"] for r in report["results"]] == [10, 100, 1000]
    assert report["slope"] == pytest.approx(-1.0, abs=0.5)


def test_estimate_csv_without_slope(capsys):
    code, out = run(capsys, "estimate", "--p", "0.3", "--n", "10,20", "--trials", "20", "--seed", "3")
    assert code == EXIT_OK
    df = table(out)
    assert list(df.columns) == ["n", "empirical_var", "qcrb", "mean_estimate", "trials", "seed", "slope"]
    assert df["slope"].isna().all()


def test_bk_error(capsys):
    code, out = run(capsys, "bk-error", "--r", "0,2,4", "--N", "1")
    assert code == EXIT_OK
    df = table(out)
    assert list(df.columns) == ["r", "N", "lower_bound"]
    assert df["lower_bound"].is_monotonic_decreasing
    assert df["lower_bound"].iloc[-1] < 1e-3


def test_json_format_and_out_file(capsys, tmp_path):
    path = tmp_path / "table.json"
    code, out = run(capsys, "fig-finite-qfi", "--nbar", "0.5", "--method", "closed", "--format", "json",
                    "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    records = json.loads(path.read_text())
    assert records[0]["qfi_asymptotic"] == pytest.approx(1 / 0.75)
    assert records[0]["qfi_suboptimal"] == pytest.approx(4.0)


def test_drawn_seed_fits_signed_64_bits():
    for _ in range(20):
        seed = RunConfig(command="verify").ensure_seed()
        assert 0 <= seed < 2 ** 63
