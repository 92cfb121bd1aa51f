import json
import subprocess
import sys

import pytest

from wallcross.cli import main

RUNNING = {"surface": "Bl1P2", "delta": [1, 0], "c": 2, "L_minus": [3, -2], "L_plus": [3, -1],
           "alpha": [1, 0]}


@pytest.fixture
def job(tmp_path):
    def write(data):
        path = tmp_path / "job.json"
        path.write_text(json.dumps(data))
        return str(path)
    return write


def run(argv, capsys):
    status = main(argv)
    out = capsys.readouterr()
    return status, out.out, out.err


def test_surface(job, capsys):
    status, out, _ = run(["surface", "--config", job({"surface": {"preset": "BlnP2", "params": {"n": 1}}})], capsys)
    rec = json.loads(out)
    assert status == 0 and rec["b2"] == 2 and rec["K_squared"] == 8 and rec["signature"] == [1, 1]


def test_delta_running_example(job, capsys):
    status, out, _ = run(["delta", "--config", job(RUNNING)], capsys)
    rec = json.loads(out)
    assert status == 0 and rec["total"] == "39/8"
    assert rec["walls"][0]["zeta"] == [1, -2] and rec["walls"][0]["sign"] == -1


def test_delta_km(job, capsys):
    status, out, _ = run(["delta", "--config", job(RUNNING), "--km-normalization"], capsys)
    assert json.loads(out)["total"] == "78"


def test_walls_with_oracle(job, capsys):
    status, out, _ = run(["walls", "--config", job(RUNNING), "--oracle-radius", "20"], capsys)
    rec = json.loads(out)
    assert status == 0 and rec["oracle"]["agrees"]
    (wall,) = rec["walls"]
    assert wall["t"] == "1/2" and wall["classes_on_wall"] == [[1, -2]]
    assert (wall["ell"], wall["h_plus"], wall["h_minus"], wall["N_plus"], wall["N_minus"]) == (1, 0, 1, 0, 1)


def test_walls_equal_endpoints(job, capsys):
    status, out, _ = run(["walls", "--config", job(dict(RUNNING, L_minus=[3, -1]))], capsys)
    assert status == 0 and json.loads(out)["walls"] == []


def test_flips(job, capsys):
    status, out, _ = run(["flips", "--config", job(RUNNING), "--format", "md"], capsys)
    assert status == 0 and out.startswith("| t | zeta | k |")
    assert out.count("| flip |") == 2


def test_csv(job, capsys):
    status, out, _ = run(["delta", "--config", job(RUNNING), "--format", "csv"], capsys)
    assert out.splitlines()[-1].startswith("total,") and out.splitlines()[-1].endswith(",39/8")


def test_out_file_and_determinism(job, tmp_path, capsys):
    cfg = job(RUNNING)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["walls", "--config", cfg, "--out", str(a)]) == 0
    assert main(["walls", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_config_errors(job, tmp_path, capsys):
    status, _, err = run(["delta", "--config", job(dict(RUNNING, delta=[1, 0, 0]))], capsys)
    assert status == 2 and json.loads(err)["error"] == "CONFIG"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    status, _, err = run(["surface", "--config", str(bad)], capsys)
    assert status == 2 and "not valid JSON" in json.loads(err)["message"]
    status, _, err = run(["walls", "--config", job({"surface": "Bl1P2"})], capsys)
    assert status == 2 and "missing" in json.loads(err)["message"]


def test_module_errors_carry_codes(job, capsys):
    status, _, err = run(["walls", "--config", job(dict(RUNNING, L_plus=[2, -1]))], capsys)
    rec = json.loads(err)
    assert status == 2 and rec["error"] == "ENDPOINT_ON_WALL" and "(1,-2)" in rec["message"]
    status, _, err = run(["surface", "--config", job({"surface": {"gram": [[1, 0], [0, 1]], "K": [1, 1],
                                                                   "ample": [1, 0]}})], capsys)
    assert status == 2 and json.loads(err)["error"] == "BAD_SIGNATURE"


def test_verify_internal_checks_pass(capsys):
    status, out, _ = run(["verify", "--skip-reference", "--oracle-radius", "15", "--seed", "3"], capsys)
    rec = json.loads(out)
    assert status == 0 and rec["passed"] and rec["failures"] == 0


def test_module_entry_point(job):
    proc = subprocess.run([sys.executable, "-m", "wallcross", "delta", "--config", job(RUNNING)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["total"] == "39/8"
