"""Tests for the command-line pipeline and its output contracts."""

import json

import numpy as np
import pytest
from click.testing import CliRunner

from wageineq import panel as pn
from wageineq import varx as vx
from wageineq.cli import main, run_demo
from wageineq.fixtures import (
    constant_panel,
    make_quarters,
    synthetic_shock_series,
    synthetic_wage_panel,
)


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def inputs(tmp_path):
    panel = synthetic_wage_panel(40)
    wages = tmp_path / "wages.csv"
    shocks = tmp_path / "shocks.csv"
    pn.write_wage_csv(panel, wages)
    pn.write_shock_csv(synthetic_shock_series(panel.quarters), shocks)
    return wages, shocks


class TestDecompose:
    def test_summary_and_output(self, runner, inputs, tmp_path):
        wages, _ = inputs
        out = tmp_path / "out"
        result = runner.invoke(main, ["decompose", "--wages", str(wages), "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "mean within share" in result.output
        series = pn.read_series_csv(str(out / "series.csv"))
        assert np.allclose(series.within_share + series.between_share, 1.0, atol=1e-12)

    def test_all_equal_fixture_zero_total(self, runner, tmp_path):
        wages = tmp_path / "flat.csv"
        pn.write_wage_csv(constant_panel(8), wages)
        out = tmp_path / "out"
        result = runner.invoke(main, ["decompose", "--wages", str(wages), "--out", str(out)])
        assert result.exit_code == 0
        series = pn.read_series_csv(str(out / "series.csv"))
        assert np.all(series.total == 0.0)

    def test_ingestion_error_nonzero_exit(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("quarter,race,quantile,wage\n2000Q1,Asian,D1,-5\n")
        result = runner.invoke(main, ["decompose", "--wages", str(bad), "--out", str(tmp_path)])
        assert result.exit_code != 0
        assert "positive" in result.output

    def test_missing_wages_flag(self, runner):
        result = runner.invoke(main, ["decompose"])
        assert result.exit_code != 0


class TestGrowth:
    def test_writes_growth_csv(self, runner, inputs, tmp_path):
        wages, _ = inputs
        out = tmp_path / "out"
        result = runner.invoke(main, ["growth", "--wages", str(wages), "--out", str(out)])
        assert result.exit_code == 0
        growth = pn.read_growth_csv(str(out / "growth.csv"))
        assert growth.growth.shape[1] == 9

    def test_short_span_fails(self, runner, tmp_path):
        wages = tmp_path / "short.csv"
        pn.write_wage_csv(constant_panel(4), wages)
        result = runner.invoke(main, ["growth", "--wages", str(wages), "--out", str(tmp_path)])
        assert result.exit_code != 0


class TestIrf:
    ARGS = ["--reps", "100", "--seed", "42"]

    def test_writes_irfs_and_manifest(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            ["irf", "--wages", str(wages), "--shocks", str(shocks), "--out", str(out)] + self.ARGS,
        )
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["files"] == ["irf_total.csv", "irf_components.csv"]
        assert manifest["spec"]["seed"] == 42
        assert len(manifest["wage_csv"]["sha256"]) == 64
        for fname in manifest["files"]:
            irf = vx.read_irf_csv(str(out / fname))
            assert np.all(irf.lower <= irf.point)
            assert np.all(irf.point <= irf.upper)
        total = vx.read_irf_csv(str(out / "irf_total.csv"))
        assert total.names == ("total",)
        comps = vx.read_irf_csv(str(out / "irf_components.csv"))
        assert comps.names == ("within_d1", "within_q3", "within_d9", "between")

    def test_same_seed_byte_identical(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        blobs = []
        for sub in ("a", "b"):
            out = tmp_path / sub
            result = runner.invoke(
                main,
                ["irf", "--wages", str(wages), "--shocks", str(shocks), "--out", str(out)]
                + self.ARGS,
            )
            assert result.exit_code == 0, result.output
            blobs.append(
                tuple((out / f).read_bytes() for f in ("irf_total.csv", "irf_components.csv"))
            )
        assert blobs[0] == blobs[1]

    def test_subsample_flags(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            [
                "irf", "--wages", str(wages), "--shocks", str(shocks), "--out", str(out),
                "--start", "2001Q1", "--end", "2009Q4", "--target", "total",
            ]
            + self.ARGS,
        )
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["start"] == "2001Q1"
        assert manifest["files"] == ["irf_total.csv"]

    def test_control_series_joins_system(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        panel = pn.parse_wage_csv(str(wages))
        ip = tmp_path / "indprod.csv"
        pn.write_shock_csv(synthetic_shock_series(panel.quarters, seed=5), ip)
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            [
                "irf", "--wages", str(wages), "--shocks", str(shocks), "--out", str(out),
                "--control", str(ip), "--target", "total",
            ]
            + self.ARGS,
        )
        assert result.exit_code == 0, result.output
        irf = vx.read_irf_csv(str(out / "irf_total.csv"))
        assert irf.names == ("total", "indprod")

    def test_per_component_mode(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        out = tmp_path / "out"
        result = runner.invoke(
            main,
            [
                "irf", "--wages", str(wages), "--shocks", str(shocks), "--out", str(out),
                "--target", "components", "--per-component",
            ]
            + self.ARGS,
        )
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["files"] == [
            "irf_within_d1.csv",
            "irf_within_q3.csv",
            "irf_within_d9.csv",
            "irf_between.csv",
        ]

    def test_alignment_failure_nonzero_exit(self, runner, inputs, tmp_path):
        wages, _ = inputs
        far = tmp_path / "far.csv"
        pn.write_shock_csv(synthetic_shock_series(make_quarters("1980Q1", 30)), far)
        result = runner.invoke(
            main,
            ["irf", "--wages", str(wages), "--shocks", str(far), "--out", str(tmp_path / "o")]
            + self.ARGS,
        )
        assert result.exit_code != 0

    def test_config_file_with_flag_override(self, runner, inputs, tmp_path):
        wages, shocks = inputs
        out = tmp_path / "out"
        cfg = tmp_path / "run.json"
        cfg.write_text(
            json.dumps(
                {
                    "wages": str(wages),
                    "shocks": str(shocks),
                    "out": str(out),
                    "reps": 100,
                    "seed": 7,
                    "targets": ["total"],
                }
            )
        )
        result = runner.invoke(main, ["irf", "--config", str(cfg), "--seed", "99"])
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["spec"]["seed"] == 99  # flag wins
        assert manifest["spec"]["bootstrap_reps"] == 100  # from config
        assert manifest["targets"] == ["total"]


class TestDemo:
    def test_all_stages_pass(self, tmp_path):
        results = run_demo(tmp_path / "demo", reps=100, seed=0)
        assert all(ok for _, ok, _ in results), results
        assert [name for name, _, _ in results] == ["fixtures", "decompose", "irf", "growth"]

    def test_corrupted_fixture_fails_with_stage_name(self, tmp_path, runner):
        out = tmp_path / "demo"
        run_demo(out, reps=100, seed=0)
        # corrupt the wage file and rerun decompose against it
        wages = out / "wages.csv"
        wages.write_text(wages.read_text().replace("\n2000Q3", "\nBADQ3", 1))
        result = runner.invoke(main, ["decompose", "--wages", str(wages), "--out", str(out)])
        assert result.exit_code != 0

    def test_cli_exit_zero(self, runner, tmp_path):
        result = runner.invoke(main, ["demo", "--out", str(tmp_path / "d"), "--reps", "100"])
        assert result.exit_code == 0, result.output
        assert result.output.count("PASS") == 4
