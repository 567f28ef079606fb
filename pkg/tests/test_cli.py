"""Scenario loading and command-line interface tests."""

import pytest

from steptrack.beacon import az_coeff_from_elevation
from steptrack.cli import main
from steptrack.scenario import (
    ScenarioError,
    bundled_scenarios,
    load_scenario,
    resolve_scenario_path,
)

MINIMAL = """
duration_s: 4.0
seed: 3
output: out.csv

orbit:
  center_azimuth_deg: 10.05
  center_elevation_deg: 70.02
  azimuth_amplitude_deg: 0.0
  elevation_amplitude_deg: 0.0

antenna:
  azimuth_deg: 10.0
  elevation_deg: 70.0

receiver:
  noise_sigma_db: 0.0

parabola:
  k_y_db_per_deg2: -11.4
  peak_level_db: 6.0

tracker:
  cycle_period_s: 3.0
  estimator: batch-ls
"""


@pytest.fixture
def minimal_scenario(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(MINIMAL)
    return path


# -- scenario loading ----------------------------------------------------------

def test_load_minimal_scenario(minimal_scenario):
    sc = load_scenario(minimal_scenario)
    assert sc.duration == 4.0
    assert sc.orbit.center_azimuth == 10.05
    assert sc.antenna.true_azimuth == 10.0
    assert sc.receiver.rng_seed == 3
    assert sc.tracker.estimator == "batch-ls"
    assert sc.peak_level_db == 6.0


def test_tracker_k_defaults_to_parabola_k(minimal_scenario):
    sc = load_scenario(minimal_scenario)
    assert sc.tracker.k_el == -11.4


def test_antenna_defaults_to_orbit_center(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("antenna:\n  azimuth_deg: 10.0\n  elevation_deg: 70.0\n", ""))
    sc = load_scenario(path)
    assert sc.antenna.true_azimuth == sc.orbit.center_azimuth


def test_missing_k_y_names_field(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("  k_y_db_per_deg2: -11.4\n", ""))
    with pytest.raises(ScenarioError, match="parabola.k_y_db_per_deg2"):
        load_scenario(path)


def test_missing_duration_names_field(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("duration_s: 4.0\n", ""))
    with pytest.raises(ScenarioError, match="duration_s"):
        load_scenario(path)


def test_invalid_section_value_reported(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("cycle_period_s: 3.0", "cycle_period_s: -3.0"))
    with pytest.raises(ScenarioError, match="tracker"):
        load_scenario(path)


def test_bundled_scenarios_load():
    names = bundled_scenarios()
    assert "default_figure8" in names
    for name in names:
        load_scenario(resolve_scenario_path(name))


def test_unknown_scenario_name():
    with pytest.raises(ScenarioError):
        resolve_scenario_path("no_such_scenario")


# -- simulate ---------------------------------------------------------------------

def test_simulate_writes_expected_records(minimal_scenario, tmp_path, capsys):
    out = tmp_path / "run.csv"
    code = main(["simulate", str(minimal_scenario), "--output", str(out)])
    assert code == 0
    captured = capsys.readouterr().out
    assert "wrote 200 records" in captured  # 4 s at 20 ms
    assert "beacon mean" in captured
    assert "peak-to-peak" in captured
    assert out.exists()
    assert len(out.read_text().splitlines()) == 201  # header + records


def test_simulate_bundled_name_with_duration_override(tmp_path, capsys):
    out = tmp_path / "fig8.csv"
    code = main(["simulate", "default_figure8", "--duration-s", "60", "--output", str(out)])
    assert code == 0
    # one record per 20 ms sampling step
    assert "wrote 3000 records" in capsys.readouterr().out


def test_simulate_duration_zero(minimal_scenario, tmp_path, capsys):
    out = tmp_path / "empty.csv"
    code = main(["simulate", str(minimal_scenario), "--output", str(out), "--duration-s", "0"])
    assert code == 0
    assert "wrote 0 records" in capsys.readouterr().out


def test_simulate_missing_field_exits_one(tmp_path, capsys):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("  k_y_db_per_deg2: -11.4\n", ""))
    code = main(["simulate", str(path)])
    assert code == 1
    assert "k_y_db_per_deg2" in capsys.readouterr().err


def test_simulate_infeasible_pattern_exits_one(tmp_path, capsys):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("elevation_deg: 70.0", "elevation_deg: 89.99"))
    code = main(["simulate", str(path)])
    assert code == 1


def test_simulate_byte_identical_runs(tmp_path):
    path = tmp_path / "s.yaml"
    path.write_text(MINIMAL.replace("noise_sigma_db: 0.0", "noise_sigma_db: 0.3"))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", str(path), "--output", str(out1)]) == 0
    assert main(["simulate", str(path), "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


# -- fit ----------------------------------------------------------------------------

@pytest.fixture
def static_log(minimal_scenario, tmp_path):
    out = tmp_path / "static.csv"
    assert main(["simulate", str(minimal_scenario), "--output", str(out)]) == 0
    return out


def test_fit_recovers_generator_peak(static_log, capsys):
    code = main(["fit", str(static_log), "--k-y", "-11.4"])
    assert code == 0
    out = capsys.readouterr().out
    values = {}
    for line in out.splitlines():
        key, _, rest = line.partition(":")
        values[key.strip()] = float(rest.split()[0])
    assert values["peak azimuth"] == pytest.approx(10.05, abs=1e-3)
    assert values["peak elevation"] == pytest.approx(70.02, abs=1e-3)
    assert values["peak level"] == pytest.approx(6.0, abs=1e-3)


def test_fit_synthetic_noiseless_log_to_1e6(tmp_path, capsys):
    # log written directly from the parabola (positions unquantized)
    from steptrack.beacon import ParabolaParams, beacon_level
    from steptrack.telemetry import TelemetryLog, TelemetryRecord, write_csv

    params = ParabolaParams(
        k_az=az_coeff_from_elevation(-11.4, 70.02), k_el=-11.4,
        peak_az=10.05, peak_el=70.02, peak_level=6.0,
    )
    rng_positions = [
        (10.05 + 0.2 * dx, 70.02 + 0.05 * dy)
        for dx in (-1.0, -0.5, 0.0, 0.5, 1.0)
        for dy in (-1.0, 0.0, 1.0)
    ]
    log = TelemetryLog()
    for i, (az, el) in enumerate(rng_positions):
        level = beacon_level(params, az, el)
        log.append(TelemetryRecord(i * 0.02, az, el, az, el, level, 5.0, "acquire", 0))
    path = tmp_path / "synthetic.csv"
    write_csv(log, str(path))
    assert main(["fit", str(path), "--k-y", "-11.4"]) == 0
    out = capsys.readouterr().out
    values = [float(line.split(":")[1].split()[0]) for line in out.splitlines()]
    assert values[0] == pytest.approx(10.05, abs=1e-6)
    assert values[1] == pytest.approx(70.02, abs=1e-6)
    assert values[2] == pytest.approx(6.0, abs=1e-6)
    assert values[3] < 1e-9  # residual rms of an exact model


def test_fit_batch_and_rls_agree(static_log, capsys):
    assert main(["fit", str(static_log), "--k-y", "-11.4", "--mode", "batch-ls"]) == 0
    batch = capsys.readouterr().out
    assert main([
        "fit", str(static_log), "--k-y", "-11.4", "--mode", "rls", "--forgetting", "1.0",
    ]) == 0
    rls = capsys.readouterr().out

    def peak_values(text):
        return [float(line.split(":")[1].split()[0]) for line in text.splitlines()[:3]]

    for a, b in zip(peak_values(batch), peak_values(rls)):
        assert a == pytest.approx(b, abs=1e-4)


def test_fit_small_window_exits_two(static_log, capsys):
    code = main(["fit", str(static_log), "--k-y", "-11.4", "--t0", "0.0", "--t1", "0.02"])
    assert code == 2
    assert "need at least 3" in capsys.readouterr().err


def test_fit_missing_log_exits_one(tmp_path):
    assert main(["fit", str(tmp_path / "nope.csv"), "--k-y", "-11.4"]) == 1


# -- stats and trajectory --------------------------------------------------------------

def test_stats_constant_synthetic(tmp_path, capsys):
    from steptrack.telemetry import TelemetryLog, TelemetryRecord, write_csv

    log = TelemetryLog(
        TelemetryRecord(i * 1.0, 0, 0, 0, 0, 2.5, 5.0, "wait", 0) for i in range(10)
    )
    path = tmp_path / "const.csv"
    write_csv(log, str(path))
    assert main(["stats", str(path)]) == 0
    out = capsys.readouterr().out
    assert "stddev  : 0.000000" in out
    assert "mean    : 2.500000" in out


def test_stats_empty_window_exits_one(static_log):
    assert main(["stats", str(static_log), "--t0", "100.0", "--t1", "200.0"]) == 1


def test_trajectory_row_count(static_log, tmp_path, capsys):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", str(static_log), "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 201  # header + one row per record


def test_trajectory_decimated(static_log, tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["trajectory", str(static_log), "--decimation", "50", "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 4  # 200 records / 50


def test_usage_error_exits_one(capsys):
    assert main(["simulate"]) == 1
    assert main(["frobnicate"]) == 1
