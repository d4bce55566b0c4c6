import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest

from bsgauss.cli import main

ONE_LAMBDA = ["--lambda-min", "1", "--lambda-max", "1", "--lambda-count", "1"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestCommands:
    def test_hs_norm(self, capsys):
        code, out, _ = run(["hs-norm", "--e-min", "-10", "--e-max", "0.45", "--e-count", "3"], capsys)
        assert code == 0
        table = rows(out)
        assert [float(r["E"]) for r in table] == pytest.approx([-10.0, -4.775, 0.45])
        assert all(float(r["slack"]) > 0 for r in table)
        assert all(float(r["trace"]) < float(r["bound"]) for r in table)

    def test_lower_bound(self, capsys):
        code, out, _ = run(["lower-bound", *ONE_LAMBDA], capsys)
        assert code == 0
        (r,) = rows(out)
        assert float(r["E"]) == pytest.approx(-6.743889553323434, abs=1e-13)
        assert float(r["E_delta"]) < float(r["E"])

    def test_lower_bound_grid(self, capsys):
        code, out, _ = run(["lower-bound", "--lambda-count", "20", "--log-spaced", "--which", "gaussian"],
                           capsys)
        assert code == 0
        table = rows(out)
        lams = [float(r["lambda"]) for r in table]
        assert lams[0] == pytest.approx(0.01) and lams[-1] == pytest.approx(20.0)
        assert lams[1] / lams[0] == pytest.approx(lams[-1] / lams[-2])
        assert "E_delta" not in table[0]

    def test_asymptotics(self, capsys):
        code, out, _ = run(["lower-bound", "--which", "asymptotics", *ONE_LAMBDA], capsys)
        assert code == 0
        (r,) = rows(out)
        assert float(r["asymptotic_large"]) == pytest.approx(-81 / (4 * math.pi ** 2))

    def test_bound_states(self, capsys):
        code, out, _ = run(["bound-states", *ONE_LAMBDA, "--modes", "16", "--quad", "32"], capsys)
        assert code == 0
        (r,) = rows(out)
        assert r["bound_state"] == "true" and r["det2_sign_change"] == "true"
        assert float(r["E_b"]) == pytest.approx(0.19270574, abs=1e-4)
        assert abs(float(r["discrepancy"])) < 1e-3

    def test_delta_branches(self, capsys):
        code, out, _ = run(["bound-states", *ONE_LAMBDA, "--kind", "delta", "--branches", "2",
                            "--no-oracle"], capsys)
        assert code == 0
        table = rows(out)
        assert [r["branch"] for r in table] == ["0", "1"]
        assert all(r["det2_sign_change"] == "true" for r in table)
        assert table[0]["oracle_energy"] == "nan"

    def test_weak_coupling_binds_near_threshold(self, capsys):
        code, out, _ = run(["bound-states", "--lambda-min", "0.01", "--lambda-max", "0.01",
                            "--lambda-count", "1", "--no-oracle", "--modes", "8", "--quad", "16"],
                           capsys)
        assert code == 0
        (r,) = rows(out)
        assert r["bound_state"] == "true"
        assert 0.4999 < float(r["E_b"]) < 0.5

    def test_missing_bound_state_is_a_row(self, capsys, monkeypatch):
        from bsgauss import cli
        from bsgauss.errors import NoBoundState

        def none_found(*args, **kwargs):
            raise NoBoundState("no root")

        monkeypatch.setattr(cli, "bound_states", none_found)
        code, out, _ = run(["bound-states", *ONE_LAMBDA, "--no-oracle"], capsys)
        assert code == 0
        (r,) = rows(out)
        assert r["bound_state"] == "false" and r["E_b"] == "nan"

    def test_delta_limit(self, capsys, tmp_path):
        out_file = tmp_path / "limit.csv"
        code, _, _ = run(["delta-limit", "--n-scales", "1,4", "--modes", "16", "--quad", "32",
                          "--surface-points", "5", "--out", str(out_file)], capsys)
        assert code == 0
        table = rows(out_file.read_text())
        assert [r["n"] for r in table] == ["1", "4"]
        assert float(table[1]["hs_distance"]) < float(table[0]["hs_distance"])
        surfaces = rows((tmp_path / "limit_surfaces.csv").read_text())
        assert len(surfaces) == 3 * 5 * 5
        assert {r["n"] for r in surfaces} == {"15", "30", "70"}


class TestOutput:
    def test_json_metadata(self, capsys):
        code, out, _ = run(["lower-bound", *ONE_LAMBDA, "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        meta = doc["metadata"]
        assert meta["command"] == "lower-bound"
        assert len(meta["config_hash"]) == 64
        assert meta["columns"][0] == "lambda"
        assert doc["rows"][0]["lambda"] == 1.0

    def test_hash_tracks_parameters(self, capsys):
        a = json.loads(run(["lower-bound", *ONE_LAMBDA, "--format", "json"], capsys)[1])
        b = json.loads(run(["lower-bound", *ONE_LAMBDA, "--format", "json", "--which", "delta"],
                           capsys)[1])
        assert a["metadata"]["config_hash"] != b["metadata"]["config_hash"]

    def test_deterministic(self, capsys):
        argv = ["lower-bound", "--lambda-count", "30"]
        assert run(argv, capsys)[1] == run(argv, capsys)[1]

    def test_workers_do_not_change_output(self, capsys):
        argv = ["hs-norm", "--e-count", "3"]
        assert run(argv, capsys)[1] == run(argv + ["--workers", "2"], capsys)[1]

    def test_cache_reuse(self, capsys, tmp_path):
        argv = ["lower-bound", *ONE_LAMBDA, "--cache-dir", str(tmp_path)]
        first = run(argv, capsys)[1]
        (entry,) = list(tmp_path.iterdir())
        stored = json.loads(entry.read_text())
        stored["main"]["rows"][0][1] = 123.0
        entry.write_text(json.dumps(stored))
        # a cache hit is served without recomputing
        second = run(argv, capsys)[1]
        assert second != first
        assert float(rows(second)[0]["E"]) == 123.0


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["hs-norm", "--e-min", "1", "--e-max", "2"],
        ["lower-bound", "--lambda-min", "-1"],
        ["bound-states", "--kind", "square"],
        ["delta-limit", "--n-scales", "a,b"],
        ["lower-bound", "--modes", "0"],
        ["lower-bound", "--out", "/nonexistent/dir/x.csv", *ONE_LAMBDA],
        ["verify", "--only", "C99"],
        ["frobnicate"],
    ])
    def test_configuration_errors(self, argv, capsys):
        code, out, err = run(argv, capsys)
        assert code == 2
        assert out == ""
        assert len(err.strip().splitlines()) == 1
        assert err.startswith("bsgauss: ")

    def test_numerical_failure(self, capsys):
        code, out, err = run(["lower-bound", "--lambda-min", "1e200", "--lambda-max", "1e200",
                              "--lambda-count", "1"], capsys)
        assert code == 3
        assert len(err.strip().splitlines()) == 1

    def test_verify_subset(self, capsys):
        code, out, _ = run(["verify", "--only", "C2"], capsys)
        assert code == 0
        assert "[PASS] C2" in out

    def test_console_entry_point(self):
        env = dict(os.environ)
        res = subprocess.run([sys.executable, "-m", "bsgauss.cli", "lower-bound", *ONE_LAMBDA],
                             capture_output=True, text=True, env=env)
        assert res.returncode == 0
        assert res.stdout.startswith("lambda,E,")
