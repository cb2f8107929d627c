"""Command-line contract: exit codes, JSON shape, cache, config precedence."""

import json
import subprocess
import sys

from qtheta.cli import main


def run_cli(*argv):
    """In-process invocation capturing stdout."""
    import contextlib
    import io
    out = io.StringIO()
    err = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def test_expand():
    code, out, _ = run_cli("expand", "F0_star", "--order", "20")
    assert code == 0
    assert out.strip() == "D=1; T=20; K=1; 0:1 1:-1 5:-1 10:1 11:-1 18:1"


def test_verify_single_pass_and_fail():
    code, out, _ = run_cli("verify", "prop_3rd_nu", "--order", "60")
    assert code == 0 and "PASS" in out
    code, out, _ = run_cli("verify", "negative_control")
    assert code == 1 and "FAIL" in out


def test_verify_json_mismatch_field():
    code, out, _ = run_cli("--json", "verify", "negative_control")
    assert code == 1
    payload = json.loads(out)
    assert payload["schema"] == 1
    rep = payload["results"]["reports"][0]
    assert rep["status"] == "fail"
    assert rep["first_mismatch"] == "7"


def test_verify_tag_subset_exits_zero():
    code, out, _ = run_cli("verify", "--all", "--tags", "structural", "--order", "60")
    assert code == 0
    assert out.count("PASS") == 3


def test_unknown_inputs_exit_two():
    code, _, err = run_cli("expand", "not_a_function", "--order", "5")
    assert code == 2 and "unknown" in err
    code, _, err = run_cli("verify", "unknown_identity")
    assert code == 2
    code, _, err = run_cli("wrt", "sigma_2_3_5", "1")
    assert code == 2
    code, _, _ = run_cli("dsl", "poch(q; 1")
    assert code == 2


def test_usage_error_exit_two():
    code, out, err = run_cli("definitely_not_a_command")
    assert code == 2


def test_wrt_json():
    code, out, _ = run_cli("--json", "wrt", "sigma_2_3_5", "3")
    assert code == 0
    payload = json.loads(out)
    res = payload["results"]
    assert res["manifold"] == "sigma_2_3_5" and res["N"] == 3
    assert res["value"]["cyclotomic"].startswith("M=")


def test_wrt_cross():
    code, out, _ = run_cli("wrt", "sigma_2_3_5", "3", "--cross")
    assert code == 0 and "PASS" in out


def test_dsl_exit_codes():
    code, out, _ = run_cli("dsl", "poch(q;1;2) == 1 - q - q^2 + q^3")
    assert code == 0
    code, out, _ = run_cli("dsl", "poch(q;1;2) == 1 - q", "--order", "10")
    assert code == 1


def test_lvalue():
    code, out, _ = run_cli("lvalue", "chi60_111", "1", "--method", "cos_generating")
    assert code == 0 and out.strip() == "-238"
    code, out, _ = run_cli("lvalue", "chi60_111", "1", "--method", "bernoulli")
    assert out.strip() == "-238"


def test_cache_round_trip(tmp_path):
    cache = str(tmp_path / "cache")
    code1, out1, _ = run_cli("verify", "prop_3rd_nu", "--order", "40",
                             "--cache", cache)
    files = list((tmp_path / "cache").glob("*.json"))
    assert code1 == 0 and len(files) == 1
    code2, out2, _ = run_cli("verify", "prop_3rd_nu", "--order", "40",
                             "--cache", cache)
    assert code2 == code1 and out2 == out1


def test_config_and_env_precedence(tmp_path, monkeypatch):
    conf = tmp_path / "qtheta.conf"
    conf.write_text("order = 7\n# comment line\ncache_dir =\n")
    code, out, _ = run_cli("expand", "chi0_star", "--config", str(conf))
    assert code == 0 and "T=7;" in out
    monkeypatch.setenv("QTHETA_ORDER", "9")
    code, out, _ = run_cli("expand", "chi0_star", "--config", str(conf))
    assert "T=9;" in out  # environment beats the config file
    code, out, _ = run_cli("expand", "chi0_star", "--config", str(conf),
                           "--order", "11")
    assert "T=11;" in out  # flag beats everything


def test_jobs_parallel_verify():
    code, out, _ = run_cli("verify", "--all", "--tags", "structural",
                           "--order", "40", "--jobs", "2")
    assert code == 0 and out.count("PASS") == 3


def test_installed_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qtheta.cli", "lvalue",
                           "chi24_2", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "-32"
