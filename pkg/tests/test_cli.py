import csv
import io

import pytest

from cellplan.cli import ResultTable, main
from cellplan.config import ConfigError, build_config, load_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    cfg = load_config(path)
    sc = cfg.scenario
    assert sc.powers.stationary_total_dbm == 46
    assert sc.powers.backhaul_dbm == 45
    assert sc.powers.mobile_total_dbm == 43
    assert sc.powers.noise_psd_dbm_hz == -174
    assert sc.radio.gamma == pytest.approx(10.0)
    assert sc.radio.n_resource_blocks == 50
    assert sc.radio.total_bw_hz == pytest.approx(9e6)
    assert sc.tdrs.backhaul_time_frac == 0.4
    assert sc.fdrs.backhaul_bw_hz == pytest.approx(1.8e6)
    assert sc.fdrs.incident_bw_hz == pytest.approx(2.7e6)
    assert cfg.requirements.incident_bps == 8e6
    assert sc.geometry.n_routine == 80 and sc.geometry.n_incident == 50
    assert ("powers.stationary_dbm", 46.0) in cfg.defaults_used


def test_bad_time_fraction_names_field():
    with pytest.raises(ConfigError, match="backhaul_time_frac"):
        build_config({"sharing": {"tdrs": {"backhaul_time_frac": 1.3}}})


def test_unknown_key_and_bad_type():
    with pytest.raises(ConfigError, match="geometry.tier"):
        build_config({"geometry": {"tier": 3}})
    with pytest.raises(ConfigError, match="radio.gamma_db"):
        build_config({"radio": {"gamma_db": "ten"}})
    with pytest.raises(ConfigError, match="powers.backhaul_dbm"):
        build_config({"powers": {"backhaul_dbm": 47}})


def test_tiers_override():
    cfg = build_config({"geometry": {"tiers": 3}})
    assert len(cfg.scenario.geometry.layout(500).interferer_bts) == 48


def test_parse_error_has_line(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("geometry:\n  tiers: [1, 2\n")
    with pytest.raises(ConfigError, match="line"):
        load_config(path)


def test_result_table_units():
    t = ResultTable(["a", "b"], ["m", "Mbps"])
    t.add(1, 2)
    assert t.to_csv() == "a,b\nm,Mbps\n1,2\n"
    with pytest.raises(ValueError):
        ResultTable(["a"], [])


def test_fleet_command(capsys):
    code, out, _ = run(capsys, "fleet")
    assert code == 0
    r = rows(out)
    assert r[0][:6] == ["conv_side", "prop_side", "stationary_reduction", "mobile_bts",
                        "mobile_bts_exact", "total_ratio"]
    assert r[2][2:4] == ["0.8889", "5423"] and r[2][5] == "0.2344"
    code, out, _ = run(capsys, "fleet", "--round", "floor")
    assert rows(out)[2][3] == "5422"


def test_sweep_command_rows(capsys, tmp_path):
    out_path = tmp_path / "conv.csv"
    code, _, _ = run(capsys, "sweep", "--arch", "conv", "--lmin", "100", "--lmax", "1000",
                     "--step", "10", "--out", str(out_path))
    assert code == 0
    text = out_path.read_bytes()
    assert b"\r" not in text
    r = rows(text.decode())
    assert r[0] == ["side_length", "routine", "incident"]
    assert r[1] == ["m", "Mbps", "Mbps"]
    assert len(r) - 2 == 91


def test_report_command(capsys):
    code, out, _ = run(capsys, "report", "--arch", "tdrs", "--side", "900")
    assert code == 0
    r = rows(out)
    assert r[0] == ["architecture", "side_length", "routine", "incident", "backhaul"]
    assert float(r[2][2]) >= 2 and float(r[2][3]) >= 8 and float(r[2][4]) >= 4


def test_feasible_exit_codes(capsys):
    code, out, err = run(capsys, "feasible", "--arch", "conv")
    assert code == 2 and "no feasible" in err
    code, out, _ = run(capsys, "feasible", "--arch", "fdrs", "--lmax", "2500")
    assert code == 0
    assert rows(out)[2][2] == "routine"


def test_config_error_exit(capsys, tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("sharing:\n  tdrs:\n    backhaul_time_frac: 1.3\n")
    code, _, err = run(capsys, "report", "--arch", "tdrs", "--config", str(path))
    assert code == 1 and "sharing.tdrs.backhaul_time_frac" in err
    assert run(capsys, "sweep")[0] == 1  # --arch missing


def test_verbose_echoes_defaults(capsys):
    code, _, err = run(capsys, "report", "--arch", "conv", "-v")
    assert "default powers.stationary_dbm = 46.0" in err


def test_validate_command(capsys):
    code, out, _ = run(capsys, "validate", "--arch", "tdrs", "--side", "900", "--trials", "100000",
                       "--seed", "3")
    assert code == 0
    r = rows(out)
    assert [row[2] for row in r[2:]] == ["routine", "incident", "backhaul"]
    assert all(row[-1] == "yes" for row in r[2:])
