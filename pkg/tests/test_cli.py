import json
import shutil
from pathlib import Path

import pytest

from caccioppoli.cli import main

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"
SCENARIOS = REPO / "scenarios"


def run_cli(*argv):
    return main([str(a) for a in argv])


def small_scenario(tmp_path, **overrides):
    data = {
        "format": "caccioppoli-scenario/1",
        "family": {"name": "remark", "n_values": [4, 8, 16]},
        "integrands": [{"name": "one"}, {"name": "jump"}],
        "quadrature": {"order": 4},
        "deltas": [],
        "tolerances": {"l1": 0.5},
        "seed": 7,
        "output": "csv",
    }
    data.update(overrides)
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return path


class TestValidateCommand:
    def test_shipped_staircase_file_is_valid(self, capsys):
        assert run_cli("validate", FIXTURES / "staircase_n4.json") == 0
        assert "valid" in capsys.readouterr().out

    def test_tjunction_mesh_fails_with_message(self, capsys):
        assert run_cli("validate", FIXTURES / "tjunction.json") == 1
        assert "non-conforming edge" in capsys.readouterr().out

    def test_truncated_file_is_usage_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format": "caccioppoli-partition/1"')
        assert run_cli("validate", bad) == 2

    def test_missing_file_is_usage_error(self, tmp_path):
        assert run_cli("validate", tmp_path / "nope.json") == 2


class TestEvalCommand:
    def _table(self, out):
        rows = dict(line.split(",") for line in out.strip().splitlines()[1:])
        return {k: float(v) for k, v in rows.items()}

    def test_staircase_limit_constant_integrand(self, capsys):
        assert run_cli("eval", FIXTURES / "staircase_limit.json", "--integrand", "one") == 0
        table = self._table(capsys.readouterr().out)
        assert table["functional[one]"] == 1.0
        assert table["facets"] == 1

    def test_jump_integrand_matches_tv_column(self, capsys):
        assert run_cli("eval", FIXTURES / "staircase_n4.json", "--integrand", "jump") == 0
        table = self._table(capsys.readouterr().out)
        assert table["functional[jump]"] == table["total_variation"]

    def test_split_square_anisotropic(self, capsys):
        assert run_cli("eval", FIXTURES / "split_square.json", "--integrand", "aniso-x") == 0
        table = self._table(capsys.readouterr().out)
        assert abs(table["functional[aniso-x]"] - 1.0) < 1e-12

    def test_unknown_integrand_is_usage_error(self):
        assert run_cli("eval", FIXTURES / "split_square.json", "--integrand", "wat") == 2

    def test_invalid_mesh_is_finding(self):
        assert run_cli("eval", FIXTURES / "tjunction.json") == 1


class TestRunCommand:
    def test_staircase_expected_nonconvergence_is_clean_exit(self, tmp_path, capsys):
        out = tmp_path / "report.csv"
        code = run_cli(
            "run", SCENARIOS / "remark.json", "--out", out, "--no-plots"
        )
        assert code == 0
        text = out.read_text()
        header, *rows = text.split("\n\n")[0].splitlines()
        assert header.startswith("n,l1_gap,perimeter_gap,tv_gap,fgap_one,fgap_jump")
        last = rows[-1].split(",")
        assert last[0] == "64"
        assert float(last[4]) == pytest.approx(1.0, abs=1e-12)  # fgap_one
        assert last[-3:] == ["true", "true", "false"]
        assert "check,value" in text  # lifting section present (deltas set)
        printed = capsys.readouterr().out
        assert "strict=true jump_strict=false" in printed

    def test_violation_fixture_exits_one(self, tmp_path, capsys):
        out = tmp_path / "v.csv"
        code = run_cli("run", SCENARIOS / "violation.json", "--out", out, "--no-plots")
        assert code == 1
        assert "THEOREM-VIOLATION" in capsys.readouterr().out

    def test_unknown_scenario_field_is_usage_error(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"format": "caccioppoli-scenario/1", "zap": 1}))
        assert run_cli("run", path) == 2

    def test_json_report(self, tmp_path):
        sc = small_scenario(tmp_path, output="json")
        out = tmp_path / "r.json"
        assert run_cli("run", sc, "--out", out, "--no-plots") == 0
        doc = json.loads(out.read_text())
        assert doc["format"] == "caccioppoli-report/1"
        assert doc["flags"] == {"l1": True, "strict": True, "jump_strict": False}
        assert doc["rows"][-1]["functional_gaps"]["one"] == 1.0

    def test_format_flag_overrides_scenario(self, tmp_path):
        sc = small_scenario(tmp_path)
        out = tmp_path / "r.json"
        assert run_cli("run", sc, "--out", out, "--format", "json", "--no-plots") == 0
        json.loads(out.read_text())

    def test_seed_flag_overrides_scenario(self, tmp_path):
        sc = small_scenario(tmp_path, output="json")
        out = tmp_path / "r.json"
        assert run_cli("run", sc, "--out", out, "--seed", "99", "--no-plots") == 0
        assert json.loads(out.read_text())["seed"] == 99

    def test_plots_written_by_default(self, tmp_path):
        sc = small_scenario(tmp_path)
        out = tmp_path / "r.csv"
        assert run_cli("run", sc, "--out", out) == 0
        assert (tmp_path / "r_gaps.png").exists()
        assert (tmp_path / "r_field.png").exists()

    def test_no_plots_suppresses_figures(self, tmp_path):
        sc = small_scenario(tmp_path)
        out = tmp_path / "r.csv"
        assert run_cli("run", sc, "--out", out, "--no-plots") == 0
        assert not (tmp_path / "r_gaps.png").exists()

    def test_byte_identical_across_runs_and_jobs(self, tmp_path):
        sc = small_scenario(tmp_path)
        blobs = []
        for tag, jobs in (("a", 1), ("b", 1), ("c", 4)):
            out = tmp_path / f"{tag}.csv"
            assert run_cli("run", sc, "--out", out, "--jobs", jobs, "--no-plots") == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]

    def test_jobs_env_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CACCIOPPOLI_JOBS", "3")
        from caccioppoli.cli import _default_jobs

        assert _default_jobs() == 3
        monkeypatch.setenv("CACCIOPPOLI_JOBS", "zzz")
        assert _default_jobs() == 1

    def test_bad_jobs_is_usage_error(self, tmp_path):
        sc = small_scenario(tmp_path)
        assert run_cli("run", sc, "--jobs", "0", "--no-plots") == 2
