"""CLI surface: subcommands, config precedence, output formats, exit codes."""

import json

import numpy as np
import pytest

from spintracer.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, main
from spintracer.serialize import RECORD_COLUMNS, TRAJECTORY_COLUMNS


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def evolve_args(out, **kw):
    args = ["evolve", "--theta", kw.pop("theta", "1.0471975511965976"), "--ratio", kw.pop("ratio", "0.1")]
    args += ["--samples", kw.pop("samples", "201"), "--out", str(out)]
    for key, value in kw.items():
        args += [f"--{key}", value]
    return args


class TestEvolve:
    def test_exact_csv_shape_and_unitarity(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert main(evolve_args(out)) == EXIT_OK
        header, rows = read_csv(out)
        assert header == list(TRAJECTORY_COLUMNS)
        assert len(rows) == 201
        for row in rows:
            norm = float(row[5]) + float(row[6])
            assert abs(norm - 1.0) < 1e-12

    def test_adiabatic_population_constant(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert main(evolve_args(out, solver="adiabatic")) == EXIT_OK
        _, rows = read_csv(out)
        p1 = [float(row[5]) for row in rows]
        assert max(p1) - min(p1) < 1e-12  # pure phase: |c1| constant
        assert abs(p1[0] - 1.0) < 1e-12

    def test_exact_vs_numeric_files_agree(self, tmp_path):
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(evolve_args(out_a, solver="exact")) == EXIT_OK
        assert main(evolve_args(out_b, solver="numeric")) == EXIT_OK
        _, rows_a = read_csv(out_a)
        _, rows_b = read_csv(out_b)
        worst = max(
            abs(float(va) - float(vb))
            for ra, rb in zip(rows_a, rows_b)
            for va, vb in zip(ra[1:7], rb[1:7])
        )
        assert worst < 1e-9

    def test_numeric_lab_solver(self, tmp_path):
        out = tmp_path / "lab.csv"
        assert main(evolve_args(out, solver="numeric-lab")) == EXIT_OK
        _, rows = read_csv(out)
        assert abs(float(rows[0][1]) - 1.0) < 1e-12  # starts in state 1

    def test_byte_identical_reruns(self, tmp_path):
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(evolve_args(out_a, solver="numeric"))
        main(evolve_args(out_b, solver="numeric"))
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_degrees_switch(self, tmp_path):
        out_rad, out_deg = tmp_path / "rad.csv", tmp_path / "deg.csv"
        main(evolve_args(out_rad, theta=str(np.pi / 2)))
        args = evolve_args(out_deg, theta="90")
        args.append("--degrees")
        main(args)
        assert out_rad.read_text() == out_deg.read_text()

    def test_stdout_default(self, capsys):
        args = ["evolve", "--samples", "11"]
        assert main(args) == EXIT_OK
        captured = capsys.readouterr()
        assert captured.out.startswith(",".join(TRAJECTORY_COLUMNS))


class TestUsageErrors:
    def test_out_of_domain_theta(self, capsys):
        assert main(["evolve", "--theta", "0"]) == EXIT_USAGE
        assert "theta" in capsys.readouterr().err

    def test_bad_solver(self, capsys):
        assert main(["evolve", "--solver", "magic"]) == EXIT_USAGE

    def test_nonpositive_omega1(self, capsys):
        assert main(["evolve", "--omega1", "0"]) == EXIT_USAGE

    def test_unknown_subcommand(self):
        assert main(["transmogrify"]) == EXIT_USAGE

    def test_unnormalized_c0(self, capsys):
        assert main(["evolve", "--c0", "1,0,1,0"]) == EXIT_USAGE
        assert "normalized" in capsys.readouterr().err


class TestConfigPrecedence:
    def test_unknown_config_key_named(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("theta = 1.0\nfrobnicate = 7\n")
        assert main(["evolve", "--config", str(cfg)]) == EXIT_USAGE
        assert "frobnicate" in capsys.readouterr().err

    def test_config_supplies_values(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "traj.csv"
        cfg.write_text("# one period, tiny grid\ntheta = 0.7\nratio = 0.2\nsamples = 17\n")
        assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        _, rows = read_csv(out)
        assert len(rows) == 17

    def test_cli_beats_env_beats_config(self, tmp_path, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("samples = 17\n")
        out = tmp_path / "a.csv"

        # env overrides config
        monkeypatch.setenv("SPINTRACER_SAMPLES", "33")
        assert main(["evolve", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
        assert len(read_csv(out)[1]) == 33

        # CLI overrides env
        assert main(["evolve", "--config", str(cfg), "--samples", "9", "--out", str(out)]) == EXIT_OK
        assert len(read_csv(out)[1]) == 9

    def test_malformed_config_line(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("theta 1.0\n")
        assert main(["evolve", "--config", str(cfg)]) == EXIT_USAGE
        assert "key = value" in capsys.readouterr().err


class TestSweep:
    def test_records_and_fits_written(self, tmp_path):
        out = tmp_path / "records.csv"
        args = [
            "sweep",
            "--theta", "0.7853981633974483",
            "--ratio", "1e-1,0.031622776601683794,1e-2,0.0031622776601683794,1e-3",
            "--metrics", "sup-error,gamma-decomposition",
            "--out", str(out),
        ]
        assert main(args) == EXIT_OK
        header, rows = read_csv(out)
        assert header == list(RECORD_COLUMNS)
        assert len(rows) == 15
        fits = json.loads((tmp_path / "records.fits.json").read_text())
        slopes = {f["metric"]: float(f["fit"]["slope"]) for f in fits["fits"]}
        assert slopes["sup-error"] == pytest.approx(1.0, abs=0.15)
        assert slopes["gamma-nondiagonal"] == pytest.approx(2.0, abs=0.1)
        meta = json.loads((tmp_path / "records.meta.json").read_text())
        assert meta["failures"] == []
        assert len(meta["wall_times"]) == 15

    def test_empty_ratio_rejected_before_compute(self, tmp_path, capsys):
        out = tmp_path / "records.csv"
        assert main(["sweep", "--ratio", ",", "--out", str(out)]) == EXIT_USAGE
        assert not out.exists()

    def test_out_required(self, capsys):
        assert main(["sweep"]) == EXIT_USAGE
        assert "--out" in capsys.readouterr().err

    def test_deterministic_bytes(self, tmp_path):
        args = lambda p: [
            "sweep", "--ratio", "1e-1,1e-2,1e-3,1e-4", "--metrics", "gamma-decomposition",
            "--out", str(p),
        ]
        main(args(tmp_path / "a.csv"))
        main(args(tmp_path / "b.csv"))
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_parallel_workers_same_records(self, tmp_path):
        args = lambda p, w: [
            "sweep", "--ratio", "1e-1,1e-2,1e-3,1e-4", "--metrics", "gamma-decomposition",
            "--workers", w, "--out", str(p),
        ]
        assert main(args(tmp_path / "a.csv", "1")) == EXIT_OK
        assert main(args(tmp_path / "b.csv", "2")) == EXIT_OK
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_point_failure_exits_nonzero(self, tmp_path, capsys, monkeypatch):
        import spintracer.sweep as sweep_mod
        from spintracer.cli import EXIT_COMPUTATION

        def broken(spec, theta, ratio, flags, cfg=None):
            raise RuntimeError("synthetic point failure")

        monkeypatch.setattr(sweep_mod, "evaluate_point", broken)
        out = tmp_path / "records.csv"
        code = main(["sweep", "--ratio", "1e-1,1e-2,1e-3,1e-4", "--out", str(out)])
        assert code == EXIT_COMPUTATION
        assert "synthetic point failure" in capsys.readouterr().err
        meta = json.loads((tmp_path / "records.meta.json").read_text())
        assert len(meta["failures"]) == 4


class TestBerry:
    def test_adiabatic_grid_against_closed_form(self, tmp_path):
        thetas = [np.pi / 6, np.pi / 4, np.pi / 2, 2 * np.pi / 3, 5 * np.pi / 6]
        out = tmp_path / "berry.json"
        args = [
            "berry",
            "--theta", ",".join(f"{v:.17g}" for v in thetas),
            "--route", "adiabatic",
            "--state", "1,2",
            "--out", str(out),
        ]
        assert main(args) == EXIT_OK
        payload = json.loads(out.read_text())
        assert len(payload["records"]) == 10
        for rec in payload["records"]:
            theta = float(rec["theta"])
            sign = 1.0 if rec["state"] == 1 else -1.0
            expected = -np.pi * (1 + sign * np.cos(theta))
            gap = abs(float(rec["geometric_phase"]) - expected) % (2 * np.pi)
            gap = min(gap, 2 * np.pi - gap)
            assert gap < 1e-10
            assert abs(float(rec["sum_rule_mod_2pi"])) < 1e-10
            assert rec["leakage_warning"] is False

    def test_numeric_lab_route_agrees_with_closed_form(self, tmp_path):
        out = tmp_path / "berry.json"
        args = [
            "berry",
            "--theta", "1.0471975511965976",
            "--ratio", "1e-3",
            "--route", "adiabatic,numeric-lab",
            "--state", "1",
            "--out", str(out),
        ]
        assert main(args) == EXIT_OK
        records = json.loads(out.read_text())["records"]
        by_route = {rec["route"]: float(rec["geometric_phase"]) for rec in records}
        assert abs(by_route["adiabatic"] - by_route["numeric-lab"]) < 1e-2

    def test_bad_route_rejected(self, capsys):
        assert main(["berry", "--route", "psychic"]) == EXIT_USAGE


class TestVerify:
    def test_clean_build_passes(self, capsys):
        assert main(["verify"]) == EXIT_OK
        out = capsys.readouterr().out
        # every check is listed by name even when passing
        for name in (
            "eigenvector-orthonormality",
            "eigenvalue-equation-residual",
            "offdiagonal-matrix-element-identity",
            "hamiltonian-periodicity",
            "closed-form-unitarity",
            "closed-form-ode-residual",
            "integrator-norm-drift",
            "rotating-frame-consistency",
            "oracle-triangle",
            "adiabatic-flag-collapse",
        ):
            assert f"check {name}: PASS" in out

    def test_injected_fault_detected(self, capsys):
        assert main(["verify", "--inject-fault"]) == EXIT_VERIFICATION
        out = capsys.readouterr().out
        assert "check closed-form-unitarity: FAIL" in out
        assert "check oracle-triangle: FAIL" in out
