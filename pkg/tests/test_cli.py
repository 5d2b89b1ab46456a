import json
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

SRC = str(Path(__file__).resolve().parent.parent / "src")


def run_cli(*args, stdin_text=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run(
        [sys.executable, "-m", "huplab", *args],
        capture_output=True,
        text=True,
        input=stdin_text,
        env=env,
        timeout=300,
    )


CIRCLE_GRID_CONFIG = {
    "curve": {"kind": "circle"},
    "density": ["1/(2*pi)"],
    "grid": {"xi": [0.0, 1.0, 3], "eta": [0.0, 0.0, 1]},
    "quad": {"abs_tol": 1e-10, "rel_tol": 1e-10},
    "output": "csv",
}


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestFt:
    def test_uniform_circle_grid(self, tmp_path):
        res = run_cli("ft", "--config", write_config(tmp_path, CIRCLE_GRID_CONFIG))
        assert res.returncode == 0, res.stderr
        lines = res.stdout.strip().splitlines()
        assert lines[0] == "xi,eta,re,im,abs,err"
        abs_col = [float(line.split(",")[4]) for line in lines[1:]]
        assert abs_col[0] == pytest.approx(1.0, abs=1e-9)
        assert abs_col[1] == pytest.approx(0.47200121576823477, abs=1e-9)  # |J0(pi/2)|
        assert abs_col[2] == pytest.approx(0.30424217764409386, abs=1e-9)  # |J0(pi)|

    def test_empty_grid_exits_2(self, tmp_path):
        cfg = dict(CIRCLE_GRID_CONFIG, grid={"xi": [0.0, 1.0, 0], "eta": [0.0, 0.0, 1]})
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 2
        assert "empty" in res.stderr

    def test_zero_density_rows_vanish(self, tmp_path):
        cfg = dict(CIRCLE_GRID_CONFIG, density=["0"])
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 0
        for line in res.stdout.strip().splitlines()[1:]:
            assert float(line.split(",")[4]) < 1e-12

    def test_unknown_key_rejected(self, tmp_path):
        cfg = dict(CIRCLE_GRID_CONFIG, extra_field=1)
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 2
        assert "unknown key" in res.stderr

    def test_bad_json_exits_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        res = run_cli("ft", "--config", str(path))
        assert res.returncode == 2

    def test_grid_and_lambda_exclusive(self, tmp_path):
        cfg = dict(CIRCLE_GRID_CONFIG)
        cfg["lambda"] = {"kind": "circle", "radius": 1.0}
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 2

    def test_missing_decay_on_unbounded_curve_exits_2(self, tmp_path):
        cfg = {
            "curve": {"kind": "exp-curve"},
            "density": ["exp(-(t^2))"],
            "grid": {"xi": [0.0, 1.0, 2], "eta": [0.0, 0.0, 1]},
        }
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 2
        assert "decay" in res.stderr

    def test_lambda_sample_mode(self, tmp_path):
        cfg = {
            "curve": {"kind": "circle"},
            "density": ["1/(2*pi)"],
            "lambda": {"kind": "lattice-cross", "alpha": 1.0, "beta": 1.0},
            "window": [-2.0, 2.0, -2.0, 2.0],
            "samples": 16,
        }
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 0
        assert len(res.stdout.strip().splitlines()) == 1 + 9  # header + lattice points

    def test_json_output_schema(self, tmp_path):
        res = run_cli("ft", "--config", write_config(tmp_path, CIRCLE_GRID_CONFIG), "--output", "json")
        assert res.returncode == 0
        doc = json.loads(res.stdout)
        assert doc["schema_version"] == 1
        assert len(doc["rows"]) == 3

    def test_stdin_config(self):
        res = run_cli("ft", "--config", "-", stdin_text=json.dumps(CIRCLE_GRID_CONFIG))
        assert res.returncode == 0

    def test_gaussian_decay_curve(self, tmp_path):
        cfg = {
            "curve": {"kind": "exp-curve"},
            "density": ["sin(t)*exp(-(t^2))"],
            "decay": {"kind": "gaussian"},
            "grid": {"xi": [0.0, 0.0, 1], "eta": [-2.0, 2.0, 5]},
        }
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 0
        for line in res.stdout.strip().splitlines()[1:]:
            assert float(line.split(",")[4]) < 1e-10

    def test_quadrature_failure_exits_3_with_point(self, tmp_path):
        # megahertz density oscillation exhausts the panel budget
        cfg = {
            "curve": {"kind": "circle"},
            "density": ["sin(1000000*t)"],
            "grid": {"xi": [0.5, 0.5, 1], "eta": [0.7, 0.7, 1]},
        }
        res = run_cli("ft", "--config", write_config(tmp_path, cfg))
        assert res.returncode == 3
        assert "(xi, eta)" in res.stderr and "0.5" in res.stderr


class TestAnnihilate:
    @pytest.mark.parametrize(
        "args",
        [
            ("annihilate", "hyperbola-line", "--samples", "64"),
            ("annihilate", "fourlines", "--p", "3", "--eta0", "0", "--samples", "64"),
            ("annihilate", "circle-bessel", "--k", "0", "--n", "1", "--samples", "64"),
            ("annihilate", "expcurve-vline", "--samples", "64"),
        ],
    )
    def test_cases_pass(self, args):
        res = run_cli(*args)
        assert res.returncode == 0, res.stderr
        doc = json.loads(res.stdout)
        assert doc["schema_version"] == 1
        assert doc["verification"]["ok"] is True
        assert doc["verification"]["witness_magnitude"] > 0.05

    def test_certificate_payload_roundtrips_density(self):
        res = run_cli("annihilate", "hyperbola-line", "--samples", "32")
        doc = json.loads(res.stdout)
        assert doc["certificate"]["measure"]["densities"] == ["sqrt(cosh(2.0*t))*sin(t)*chi(-pi,pi)(t)"]
        assert doc["certificate"]["measure"]["decay"]["kind"] == "compact"


class TestFourlines:
    def test_classify_p4_example(self, tmp_path):
        fibers = tmp_path / "fibers.json"
        fibers.write_text(json.dumps({"fibers": [{"xi": 0.0, "sigma": [0.0, 0.5, 1.0, 1.5]}]}))
        res = run_cli("fourlines", "classify", "--p", "4", "--fibers", str(fibers))
        assert res.returncode == 0, res.stderr
        doc = json.loads(res.stdout)
        assert doc["results"][0]["class"] == "P3"

    def test_classify_points_via_stdin(self):
        payload = json.dumps({"points": [[0.0, 3.5], [0.0, 0.5], [1.0, -0.5]]})
        res = run_cli("fourlines", "classify", "--p", "3", "--fibers", "-", stdin_text=payload)
        assert res.returncode == 0
        doc = json.loads(res.stdout)
        assert {r["xi"]: r["class"] for r in doc["results"]} == {0.0: "P2", 1.0: "P1"}

    def test_tau_hand_example(self):
        # heights (0, 1, 0.5) map to points (1, -1, i)
        res = run_cli("fourlines", "tau", "--p", "3", "--etas", "0,1,0.5")
        doc = json.loads(res.stdout)
        assert doc["tau0"] == pytest.approx([0.0, 1.0], abs=1e-12)
        assert doc["tau1"] == pytest.approx([-1.0, 0.0], abs=1e-12)
        assert doc["tau2"] == pytest.approx([0.0, -1.0], abs=1e-12)

    def test_delta(self):
        res = run_cli("fourlines", "delta", "--etas", "0,1")
        doc = json.loads(res.stdout)
        assert doc["delta0"] == pytest.approx([-1.0, 0.0], abs=1e-12)
        assert doc["delta1"] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_rho_repeated_point_is_zero(self):
        res = run_cli("fourlines", "rho", "--etas", "0.3,0.3,1.1")
        doc = json.loads(res.stdout)
        assert doc["rho"] == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_classify_requires_fibers(self):
        res = run_cli("fourlines", "classify", "--p", "3")
        assert res.returncode == 2


class TestExitCodes:
    def test_failed_verification_exits_4(self):
        # impossible tolerance forces a residual failure
        res = run_cli("annihilate", "circle-bessel", "--k", "0", "--n", "1", "--samples", "16", "--tol", "1e-30")
        assert res.returncode == 4
        assert json.loads(res.stdout)["verification"]["ok"] is False

    def test_bad_order_exits_2(self):
        res = run_cli("bessel", "j", "--order", "1/3", "--x", "1.0")
        assert res.returncode == 2

    def test_bad_zero_index_exits_2(self):
        res = run_cli("bessel", "zero", "--order", "0", "--n", "0")
        assert res.returncode == 2

    def test_bad_p_exits_2(self):
        res = run_cli("fourlines", "tau", "--p", "2", "--etas", "0,0.5,1")
        assert res.returncode == 2

    def test_bad_eta0_exits_2(self):
        res = run_cli("annihilate", "fourlines", "--p", "3", "--eta0", "2.5")
        assert res.returncode == 2

    def test_unknown_subcommand_exits_2(self):
        res = run_cli("transmogrify")
        assert res.returncode == 2


def test_output_json_flag_accepted_everywhere():
    commands = [
        ("annihilate", "circle-line", "--samples", "16", "--output", "json"),
        ("fourlines", "rho", "--etas", "0,0.5,1", "--output", "json"),
        ("bessel", "j", "--order", "0", "--x", "1.0", "--output", "json"),
        ("verdict", "circle-spiral", "--output", "json"),
    ]
    for cmd in commands:
        res = run_cli(*cmd)
        assert res.returncode == 0, res.stderr
        assert json.loads(res.stdout)["schema_version"] == 1


class TestBessel:
    def test_zero(self):
        res = run_cli("bessel", "zero", "--order", "0", "--n", "1")
        doc = json.loads(res.stdout)
        assert doc["zero"] == pytest.approx(2.404825557695773, abs=1e-12)

    def test_value_half_order(self):
        res = run_cli("bessel", "j", "--order", "1/2", "--x", str(math.pi))
        doc = json.loads(res.stdout)
        assert abs(doc["value"]) < 1e-12

    def test_nonzero(self):
        res = run_cli("bessel", "nonzero", "--x", "1.0", "--parity", "integers")
        assert json.loads(res.stdout)["nonzero_for_all_orders"] is True


class TestVerdict:
    def test_lattice_cross(self):
        res = run_cli("verdict", "lattice-cross", "--alpha", "1", "--beta", "2")
        doc = json.loads(res.stdout)
        assert doc["answer"] == "NotHUP"

    def test_circle_lines_rational(self):
        res = run_cli("verdict", "circle-lines", "--angle", "1/4")
        doc = json.loads(res.stdout)
        assert doc["answer"] == "NotHUP"

    def test_circle_lines_float_unknown(self):
        res = run_cli("verdict", "circle-lines", "--angle", "0.25")
        doc = json.loads(res.stdout)
        assert doc["answer"] == "Unknown"

    def test_missing_parameter(self):
        res = run_cli("verdict", "lattice-cross")
        assert res.returncode == 2


def test_identical_runs_are_byte_identical(tmp_path):
    cfg = write_config(tmp_path, CIRCLE_GRID_CONFIG)
    first = run_cli("ft", "--config", cfg)
    second = run_cli("ft", "--config", cfg)
    assert first.stdout == second.stdout
    a = run_cli("fourlines", "tau", "--p", "5", "--etas", "0.1,0.7,1.9")
    b = run_cli("fourlines", "tau", "--p", "5", "--etas", "0.1,0.7,1.9")
    assert a.stdout == b.stdout


def test_thread_cap_does_not_change_output(tmp_path):
    cfg = write_config(tmp_path, CIRCLE_GRID_CONFIG)
    env_one = dict(os.environ, PYTHONPATH=SRC, HUPLAB_THREADS="1")
    env_four = dict(os.environ, PYTHONPATH=SRC, HUPLAB_THREADS="4")
    runs = [
        subprocess.run(
            [sys.executable, "-m", "huplab", "ft", "--config", cfg],
            capture_output=True,
            text=True,
            env=env,
            timeout=300,
        )
        for env in (env_one, env_four)
    ]
    assert runs[0].stdout == runs[1].stdout
