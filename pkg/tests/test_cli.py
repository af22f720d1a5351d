import os

import pytest

from cli import ExperimentConfig, build_kinetic, load_config, main
from core.table import KineticTable, write_table
from errors import ConfigError


def test_config_text_round_trip():
    config = ExperimentConfig(command="fd", ul=2.0, domain=(-2.0, 5.0), orders=(2, 4), trajectories=True)
    assert ExperimentConfig.parse(config.emit()) == config


def test_grid_shorthand_and_errors():
    config = ExperimentConfig.from_strings({"u_grid": "1:2:3", "order": "4"})
    assert config.u_grid == (1.0, 1.5, 2.0)
    assert config.order == 4
    with pytest.raises(ConfigError):
        ExperimentConfig.from_strings({"flavour": "cubic"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_strings({"order": "three"})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_strings({"domain": "3.0,1.0"})
    with pytest.raises(ConfigError):
        ExperimentConfig.parse("flux cubic\n")


def test_flags_config_file_and_aliases(tmp_path):
    path = tmp_path / "exp.txt"
    path.write_text("# experiment\nflux = cubic\nul = 2.0\n")
    config = load_config(["riemann", "--config", str(path), "--ur", "-1", "--ugrid", "1:3:3"])
    assert (config.command, config.ul, config.ur) == ("riemann", 2.0, -1.0)
    assert config.u_grid == (1.0, 2.0, 3.0)


def test_kinetic_specs(pair, tmp_path):
    assert build_kinetic("linear:0.75", pair)(2.0) == -1.5
    assert build_kinetic("natural", pair)(2.0) == pytest.approx(-1.0)
    path = write_table(KineticTable(rows=[(1.0, -0.8), (2.0, -1.6), (3.0, -2.4)], flux_name="cubic"),
                       str(tmp_path / "kin.txt"))
    assert build_kinetic(f"table:{path}", pair)(-2.0) == pytest.approx(1.6)
    for spec in ("linear:0.3", "linear:abc", "sharp"):
        with pytest.raises(ConfigError):
            build_kinetic(spec, pair)


def test_riemann_command_writes_artifacts(tmp_path):
    out = str(tmp_path)
    assert main(["riemann", "--ul", "1", "--ur", "-0.5", "--output", out]) == 0
    listing = open(os.path.join(out, "riemann_pattern.txt")).read()
    assert "NonclassicalShock 1.0 -> -0.75" in listing
    profile = open(os.path.join(out, "riemann_profile.csv")).read()
    assert main(["riemann", "--ul", "1", "--ur", "-0.5", "--output", out]) == 0
    assert open(os.path.join(out, "riemann_profile.csv")).read() == profile
    assert os.path.exists(os.path.join(out, "kinlab.log"))


@pytest.mark.parametrize("argv, code", [
    (["riemann", "--kinetic", "linear:0.3"], 2),
    (["riemann", "--flux", "quartic"], 2),
    (["validate", "--targets", "nonsense"], 2),
    (["riemann", "--init", "square"], 2),
])
def test_errors_map_to_exit_codes(tmp_path, argv, code):
    assert main(argv + ["--output", str(tmp_path)]) == code


def test_cauchy_and_fd_commands(tmp_path):
    out = str(tmp_path)
    assert main(["cauchy", "--t-end", "0.5", "--output", out]) == 0
    assert main(["fd", "--t-end", "0.05", "--output", out]) == 0
    for name in ("cauchy_diagnostics.csv", "cauchy_fronts.csv", "cauchy_profile.csv", "fd_profile.csv",
                 "fd_diagnostics.csv"):
        assert os.path.exists(os.path.join(out, name))


def test_validate_command(tmp_path):
    out = str(tmp_path)
    assert main(["validate", "--targets", "zero_dissipation,scheme_order", "--output", out]) == 0
    report = open(os.path.join(out, "validate_report.txt")).read()
    assert "PASS zero_dissipation" in report
    assert "PASS scheme_order" in report


@pytest.mark.slow
@pytest.mark.parametrize("target", ["entropy_conservation", "tw_dissipation", "kinetic_extraction",
                                    "regularization_witness"])
def test_validate_long_targets(tmp_path, target):
    out = str(tmp_path)
    assert main(["validate", "--targets", target, "--output", out]) == 0
    assert f"PASS {target}" in open(os.path.join(out, "validate_report.txt")).read()
