import json
import math

import numpy as np
import pytest

from mixed_spectra.cli import (
    RunConfig,
    build_parser,
    config_from_args,
    main,
    run,
)
from mixed_spectra.errors import ConfigError


def run_cli(argv):
    return main(argv)


class TestParsing:
    def test_help_lists_every_command(self, capsys):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["--help"])
        out = capsys.readouterr().out
        for cmd in ("solve", "verify-split", "verify-corollary", "verify-right",
                    "verify-voila", "verify-grisvard", "sweep", "convergence"):
            assert cmd in out

    def test_unknown_flag_is_hard_error(self):
        with pytest.raises(SystemExit) as exc:
            build_parser().parse_args(["solve", "--square", "--frobnicate"])
        assert exc.value.code == 2

    def test_levels_range_and_single(self):
        args = build_parser().parse_args(["solve", "--square", "--levels", "3..6"])
        cfg = config_from_args(args)
        assert cfg.levels == (3, 4, 5, 6)
        args = build_parser().parse_args(["solve", "--square", "--levels", "5"])
        assert config_from_args(args).levels == (5,)

    def test_square_dirichlet_indices(self):
        args = build_parser().parse_args(
            ["solve", "--square", "--dirichlet", "1,3", "--levels", "2"])
        cfg = config_from_args(args)
        assert cfg.geometry["labels"] == ["N", "D", "N", "D"]

    def test_env_level_cap(self, monkeypatch):
        monkeypatch.setenv("MIXED_SPECTRA_MAX_LEVEL", "4")
        args = build_parser().parse_args(["solve", "--square", "--levels", "3..6"])
        cfg = config_from_args(args)
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_config_roundtrip(self):
        args = build_parser().parse_args(
            ["verify-split", "--square", "--dirichlet", "1", "--neumann-side", "0",
             "--levels", "2..4", "--seed", "7"])
        cfg = config_from_args(args)
        again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
        assert again == cfg


class TestCommands:
    def test_solve_square_prints_eigenvalue(self, capsys):
        code = run_cli(["solve", "--square", "--dirichlet", "1", "--levels", "4"])
        out = capsys.readouterr().out
        assert code == 0
        lam = float(out.split("lambda_1 =")[1].split()[0])
        assert lam == pytest.approx(math.pi ** 2 / 4, abs=1e-3)

    def test_solve_num_eigs(self, capsys):
        code = run_cli(["solve", "--square", "--dirichlet", "0,1,2,3",
                        "--levels", "3", "--num-eigs", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "lambda_3" in out

    def test_solve_dump_mesh(self, tmp_path, capsys):
        path = tmp_path / "mesh.json"
        code = run_cli(["solve", "--square", "--dirichlet", "1", "--levels", "2",
                        "--dump-mesh", str(path)])
        capsys.readouterr()
        assert code == 0
        doc = json.loads(path.read_text())
        assert doc["level"] == 2
        assert len(doc["elements"]) == 4 * 16

    def test_convergence_outputs_extrapolation(self, capsys, tmp_path):
        out_base = tmp_path / "conv"
        code = run_cli(["convergence", "--square", "--dirichlet", "1",
                        "--levels", "2..5", "--out", str(out_base)])
        out = capsys.readouterr().out
        assert code == 0
        assert "extrapolated" in out
        assert (tmp_path / "conv.csv").exists()
        assert (tmp_path / "conv.json").exists()

    def test_verify_right_exit_zero(self, capsys, tmp_path):
        out_base = tmp_path / "right"
        code = run_cli(["verify-right", "--angles", "1.5707963", "0.7853982",
                        "--levels", "2..4", "--out", str(out_base)])
        out = capsys.readouterr().out
        assert code == 0
        assert out.count("ConfirmedWithMargin") == 2
        csv_text = (tmp_path / "right.csv").read_text()
        assert csv_text.startswith("index,sub,kind,status,alpha,beta,")
        assert "right-triangle-S" in csv_text

    def test_verify_split_writes_reports(self, capsys, tmp_path):
        geometry = json.dumps({
            "vertices": [[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]],
            "labels": ["N", "D", "D"]})
        out_base = tmp_path / "split"
        code = run_cli(["verify-split", "--geometry", geometry,
                        "--neumann-side", "0", "--levels", "2..4",
                        "--out", str(out_base), "--format", "json"])
        capsys.readouterr()
        assert code == 0
        doc = json.loads((tmp_path / "split.json").read_text())
        assert doc["config"]["command"] == "verify-split"
        assert doc["result"]["reports"][0]["verdict"] == "ConfirmedWithMargin"

    def test_verify_voila_trend(self, capsys):
        geometry = json.dumps({
            "vertices": [[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]],
            "labels": ["N", "D", "D"]})
        code = run_cli(["verify-voila", "--geometry", geometry,
                        "--neumann-side", "0", "--levels", "2..3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "final relative gap" in out

    def test_verify_grisvard_all_dirichlet(self, capsys):
        code = run_cli(["verify-grisvard", "--square", "--dirichlet", "0,1,2,3",
                        "--levels", "2..3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "residual" in out

    def test_sweep_writes_plot_csv(self, capsys, tmp_path):
        out_base = tmp_path / "sw"
        plot = tmp_path / "plot.csv"
        code = run_cli(["sweep", "--task", "corollary-iii", "--grid", "3x3",
                        "--levels", "2..4", "--out", str(out_base),
                        "--plot-data", str(plot)])
        capsys.readouterr()
        assert code == 0
        lines = plot.read_text().strip().splitlines()
        assert lines[0] == "alpha,beta,margin,verdict"
        assert len(lines) == 10  # header + 9 grid rows (skipped included)
        assert any("skipped" in l for l in lines[1:])

    def test_geometry_file_input(self, capsys, tmp_path):
        geo = tmp_path / "poly.json"
        geo.write_text(json.dumps({
            "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]],
            "labels": ["N", "D", "N", "N"]}))
        code = run_cli(["solve", "--geometry-file", str(geo), "--levels", "3"])
        out = capsys.readouterr().out
        assert code == 0
        assert "lambda_1" in out

    def test_missing_geometry_is_config_error(self, capsys):
        code = run_cli(["solve", "--levels", "3"])
        err = capsys.readouterr().err
        assert code == 1
        assert "configuration error" in err


class TestReproducibility:
    def test_rerun_from_embedded_config(self, capsys, tmp_path):
        out1 = tmp_path / "a"
        argv = ["verify-corollary", "--angles", "1.1", "0.9", "--which", "iii",
                "--levels", "2..4", "--out", str(out1)]
        assert run_cli(argv) == 0
        capsys.readouterr()
        doc = json.loads((tmp_path / "a.json").read_text())
        cfg = RunConfig.from_dict(doc["config"])
        cfg.out = str(tmp_path / "b")
        assert run(cfg) == 0
        capsys.readouterr()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_sweep_csv_bitwise_deterministic(self, capsys, tmp_path):
        texts = []
        for name in ("s1", "s2"):
            code = run_cli(["sweep", "--task", "right-triangle", "--grid", "3",
                            "--levels", "2..4", "--out", str(tmp_path / name)])
            capsys.readouterr()
            assert code == 0
            texts.append((tmp_path / f"{name}.csv").read_bytes())
        assert texts[0] == texts[1]
