import json

import pytest

from resonant31.cli import EXIT_CONFIG, EXIT_OK, EXIT_REJECTED, main
from resonant31.config import parse_config
from resonant31.errors import ConfigError

XPOINT = {"system": {"honeycomb": {"Mtilde": 0.146, "Ktilde": 5.73}},
          "amplitudes": {"a_minus": 0.002, "a_plus": 0.0012}}


def _run(tmp_path, capsys, cmd, cfg, *extra):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code = main([cmd, "--config", str(path), *extra])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_config_round_trip():
    cfg = parse_config(XPOINT)
    assert parse_config(cfg.model_dump()) == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        parse_config({"system": {"honeycomb": {"Mtilde": 0.1, "Ktilde": 8, "bogus": 1}}})
    with pytest.raises(ConfigError):
        parse_config({"system": {}})


def test_malformed_config_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, capsys, "freqs", {"amplitudes": {"a_minus": -1.0, "a_plus": 0.0}})
    assert code == EXIT_CONFIG
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["freqs", "--config", str(bad)]) == EXIT_CONFIG


def test_decompose_identity(tmp_path, capsys):
    cfg = {"system": {"generic": {"mass": [[1, 0], [0, 1]], "stiffness": [1, 4]}}}
    code, doc = _run(tmp_path, capsys, "decompose", cfg)
    assert code == EXIT_OK
    assert doc["command"] == "decompose"
    assert doc["result"]["omega_minus"] == pytest.approx(1.0)
    assert doc["result"]["omega_plus"] == pytest.approx(2.0)


def test_zero_amplitude_is_linear(tmp_path, capsys):
    cfg = dict(XPOINT, amplitudes={"a_minus": 0.0, "a_plus": 0.0})
    code, doc = _run(tmp_path, capsys, "freqs", cfg)
    assert code == EXIT_OK and doc["result"]["regime"] == "linear"


def test_decoupled_exact_resonance(tmp_path, capsys):
    cfg = {"system": {"generic": {"mass": [[1, 0], [0, 1]], "stiffness": [1, 9], "N3": -1.0}},
           "amplitudes": {"a_minus": 0.01, "a_plus": 0.01}}
    code, doc = _run(tmp_path, capsys, "freqs", cfg)
    assert code == EXIT_OK
    assert doc["result"]["regime"] == "resonant_exact"


def test_xpoint_frequencies(tmp_path, capsys):
    code, doc = _run(tmp_path, capsys, "freqs", XPOINT)
    assert code == EXIT_OK
    r = doc["result"]
    assert r["regime"] == "resonant_generic"
    assert r["w_minus_nlr"] == pytest.approx(5.904102, abs=2e-6)


def test_classify_and_degenerate_portrait(tmp_path, capsys):
    code, doc = _run(tmp_path, capsys, "classify", {"portrait": {"a1": -1.0, "a2": 3.0}})
    assert code == EXIT_OK and doc["result"]["zone"] == "Z21plus"
    code, doc = _run(tmp_path, capsys, "portrait", {"portrait": {"a1": 0.0, "a2": 1.0, "energies": [0.1]}})
    assert code == EXIT_OK and doc["result"]["zone"] == "OnG"


def test_portrait_writes_tables(tmp_path, capsys):
    out = tmp_path / "out"
    cfg = {"portrait": {"a1": -1.0, "a2": 3.0, "energies": [0.05, -0.2], "points": 32}}
    code, _ = _run(tmp_path, capsys, "portrait", cfg, "--out", str(out))
    assert code == EXIT_OK
    doc = json.loads((out / "portrait.json").read_text())
    assert doc["config"]["portrait"]["a1"] == -1.0
    assert list(out.glob("*.csv"))


def test_roots_csv_format(tmp_path, capsys):
    code, text = _run(tmp_path, capsys, "roots", {"portrait": {"a1": 1.0, "a2": -2.0, "energies": [0.05]}},
                      "--format", "csv")
    assert code == EXIT_OK
    assert text.count("\n") >= 2


def test_rejection_exit_code(tmp_path, capsys):
    # critical energy of the saddle: singular level set
    code, _ = _run(tmp_path, capsys, "roots", {"portrait": {"a1": 1.0, "a2": 2.0, "energies": [0.0]}})
    assert code == EXIT_REJECTED


def test_bandgap_small_sweep(tmp_path, capsys):
    cfg = {"sweep": {"Mtilde": 0.09, "Ktilde": 8.0, "a_minus": 0.0036, "a_plus": 0.0025, "points": 40}}
    code, doc = _run(tmp_path, capsys, "bandgap", cfg)
    assert code == EXIT_OK
    assert doc["result"]["case_tag"] in ("i", "ii", "iii")


def test_verify_xpoint(tmp_path, capsys):
    cfg = dict(XPOINT, verify={"slow_periods": 4})
    code, doc = _run(tmp_path, capsys, "verify", cfg)
    assert code == EXIT_OK
    checks = {c["name"]: c for c in doc["result"]["checks"]}
    assert doc["result"]["all_pass"]
    assert checks["energy_drift"]["measured"] < 1e-8
    assert checks["omega_minus"]["rel_err"] < 1e-3
