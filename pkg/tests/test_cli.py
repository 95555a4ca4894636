"""End-to-end CLI behavior: commands, file formats, exit codes, determinism."""
from __future__ import annotations

import json

import pytest

from ownlens.cli import main
from ownlens.storage import csv_bytes, read_csv


def run_cli(*args: str) -> int:
    return main([str(a) for a in args])


def mine_analyze_features(repo, out_dir, *windows, extra=()):
    window_args = []
    for w in windows:
        window_args.extend(["--window", w])
    for command in ("mine", "analyze", "features"):
        code = run_cli(
            command, "--repo", repo, "--out-dir", out_dir, *window_args, *extra
        )
        assert code == 0, f"{command} failed"


class TestMine:
    def test_two_windows_two_snapshots(self, scenario3_repo, tmp_path):
        code = run_cli(
            "mine",
            "--repo", scenario3_repo,
            "--out-dir", tmp_path,
            "--window", "1.0=..r1",
            "--window", "2.0=r1..r2",
        )
        assert code == 0
        for name in ("snapshot_1.0.json", "snapshot_2.0.json"):
            payload = json.loads((tmp_path / name).read_text())
            assert sorted(payload) == ["commits", "config", "file_authorship", "window"]

    def test_bad_ref_exits_2_naming_ref(self, scenario1_repo, tmp_path, capsys):
        code = run_cli(
            "mine",
            "--repo", scenario1_repo,
            "--out-dir", tmp_path,
            "--window", "x=..bogus-ref",
        )
        assert code == 2
        assert "bogus-ref" in capsys.readouterr().err

    def test_missing_repo_exits_3(self, tmp_path, capsys):
        code = run_cli(
            "mine",
            "--repo", tmp_path / "nowhere",
            "--out-dir", tmp_path / "out",
            "--window", "x=..r1",
        )
        assert code == 3

    def test_rerun_identical_bytes(self, scenario2_repo, tmp_path):
        args = (
            "mine", "--repo", scenario2_repo, "--out-dir", tmp_path,
            "--window", "1.0=..r1",
        )
        assert run_cli(*args) == 0
        first = (tmp_path / "snapshot_1.0.json").read_bytes()
        assert run_cli(*args) == 0
        assert (tmp_path / "snapshot_1.0.json").read_bytes() == first


class TestAnalyze:
    def test_outputs_for_scenario_release(self, scenario1_repo, tmp_path):
        mine_analyze_features(scenario1_repo, tmp_path, "1.0=..r1")
        header, rows = read_csv(tmp_path / "ownership_1.0.csv")
        assert header == [
            "path", "developer_key", "commit_count", "line_count",
            "own_commit", "own_line", "level_commit", "level_line",
        ]
        by_key = {row[1]: row for row in rows}
        assert by_key["chris@example.com"][4] == "0.250000"
        assert by_key["chris@example.com"][5] == "0.933333"
        assert by_key["pat@example.com"][4] == "0.750000"
        assert by_key["pat@example.com"][5] == "0.066667"

        header, rows = read_csv(tmp_path / "divergence_1.0.csv")
        assert rows[0][0] == "A.java"
        assert rows[0][4] == "1.000000"  # both devs common

        summary = json.loads((tmp_path / "summary_1.0.json").read_text())
        assert summary["release_name"] == "1.0"
        assert summary["median_common"] == 1.0

    def test_missing_snapshot_exits_2(self, scenario1_repo, tmp_path):
        code = run_cli(
            "analyze",
            "--repo", scenario1_repo,
            "--out-dir", tmp_path,
            "--window", "1.0=..r1",
        )
        assert code == 2

    def test_empty_window_gives_header_only_csv(self, scenario1_repo, tmp_path):
        mine_analyze_features(
            scenario1_repo, tmp_path, "1.0=..r1", extra=("--extensions", ".xyz")
        )
        header, rows = read_csv(tmp_path / "ownership_1.0.csv")
        assert rows == []
        header, rows = read_csv(tmp_path / "features_1.0.csv")
        assert rows == []

    def test_summary_medians_recomputable_from_csv(self, scenario3_repo, tmp_path):
        mine_analyze_features(scenario3_repo, tmp_path, "2.0=r1..r2")
        header, rows = read_csv(tmp_path / "divergence_2.0.csv")
        idx = header.index("common")
        commons = sorted(float(r[idx]) for r in rows)
        mid = len(commons) // 2
        median = (
            commons[mid]
            if len(commons) % 2
            else (commons[mid - 1] + commons[mid]) / 2
        )
        summary = json.loads((tmp_path / "summary_2.0.json").read_text())
        assert summary["median_common"] == pytest.approx(median)


class TestFeatures:
    def test_scenario1_row(self, scenario1_repo, tmp_path):
        mine_analyze_features(scenario1_repo, tmp_path, "1.0=..r1")
        header, rows = read_csv(tmp_path / "features_1.0.csv")
        assert header == [
            "release_name", "path", "OWN_COMMIT", "OWN_LINE",
            "MAJOR_COMMIT", "MINOR_COMMIT", "MAJOR_LINE", "MINOR_LINE",
            "COMMITS", "ADDED_LINES", "DEL_LINES", "NDEV", "LOC",
        ]
        (row,) = rows
        record = dict(zip(header, row))
        assert record["path"] == "A.java"
        assert record["OWN_COMMIT"] == "0.750000"
        assert record["OWN_LINE"] == "0.933333"
        assert record["COMMITS"] == "4"
        assert record["NDEV"] == "2"
        assert record["LOC"] == "90"

    def test_labels_join_and_missing_label(self, scenario3_repo, tmp_path):
        labels = tmp_path / "labels.csv"
        labels.write_text("path,defective\nC.java,1\nGhost.java,0\n", encoding="utf-8")
        run_cli("mine", "--repo", scenario3_repo, "--out-dir", tmp_path,
                "--window", "2.0=r1..r2")
        code = run_cli(
            "features", "--repo", scenario3_repo, "--out-dir", tmp_path,
            "--window", "2.0=r1..r2", "--labels", labels,
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "features_2.0.csv")
        assert header[-1] == "defective"
        assert rows[0][-1] == "1"

    def test_duplicate_label_exits_2(self, scenario3_repo, tmp_path):
        labels = tmp_path / "labels.csv"
        labels.write_text("path,defective\nC.java,1\nC.java,0\n", encoding="utf-8")
        run_cli("mine", "--repo", scenario3_repo, "--out-dir", tmp_path,
                "--window", "2.0=r1..r2")
        code = run_cli(
            "features", "--repo", scenario3_repo, "--out-dir", tmp_path,
            "--window", "2.0=r1..r2", "--labels", labels,
        )
        assert code == 2

    def test_no_labels_no_defective_column(self, scenario1_repo, tmp_path):
        mine_analyze_features(scenario1_repo, tmp_path, "1.0=..r1")
        header, _ = read_csv(tmp_path / "features_1.0.csv")
        assert "defective" not in header

    def test_confounder_passthrough(self, scenario1_repo, tmp_path):
        conf = tmp_path / "conf.csv"
        conf.write_text("path,wmc,cbo\nA.java,12,3\n", encoding="utf-8")
        run_cli("mine", "--repo", scenario1_repo, "--out-dir", tmp_path,
                "--window", "1.0=..r1")
        code = run_cli(
            "features", "--repo", scenario1_repo, "--out-dir", tmp_path,
            "--window", "1.0=..r1", "--confounders", conf,
        )
        assert code == 0
        header, rows = read_csv(tmp_path / "features_1.0.csv")
        assert header[-2:] == ["wmc", "cbo"]
        assert rows[0][-2:] == ["12", "3"]


class TestNpsk:
    def test_identical_groups(self, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text(
            "group_id,value\na,1\na,2\na,3\nb,1\nb,2\nb,3\n", encoding="utf-8"
        )
        out = tmp_path / "out.csv"
        assert run_cli("npsk", "--input", src, "--output", out) == 0
        header, rows = read_csv(out)
        assert header == ["group_id", "rank"]
        assert rows == [["a", "1"], ["b", "1"]]

    def test_separated_groups_ordered(self, tmp_path):
        src = tmp_path / "in.csv"
        lines = ["group_id,value"]
        lines += [f"low,{v}" for v in (1.0, 2.0, 3.0)]
        lines += [f"high,{v}" for v in (10.0, 11.0, 12.0)]
        src.write_text("\n".join(lines) + "\n", encoding="utf-8")
        out = tmp_path / "out.csv"
        assert run_cli("npsk", "--input", src, "--output", out) == 0
        _, rows = read_csv(out)
        assert rows == [["high", "1"], ["low", "2"]]

    def test_malformed_csv_exits_2(self, tmp_path):
        src = tmp_path / "in.csv"
        src.write_text("group_id,value\na,not-a-number\n", encoding="utf-8")
        assert run_cli("npsk", "--input", src, "--output", tmp_path / "o.csv") == 2


class TestRoundTripAndDeterminism:
    def test_all_outputs_roundtrip_bytes(self, scenario3_repo, tmp_path):
        mine_analyze_features(
            scenario3_repo, tmp_path, "1.0=..r1", "2.0=r1..r2"
        )
        for csv_path in sorted(tmp_path.glob("*.csv")):
            original = csv_path.read_bytes()
            header, rows = read_csv(csv_path)
            assert csv_bytes(header, rows) == original, csv_path.name

    def test_pipeline_rerun_identical(self, scenario3_repo, tmp_path):
        mine_analyze_features(scenario3_repo, tmp_path, "2.0=r1..r2")
        before = {
            p.name: p.read_bytes() for p in tmp_path.iterdir() if p.is_file()
        }
        mine_analyze_features(scenario3_repo, tmp_path, "2.0=r1..r2")
        after = {p.name: p.read_bytes() for p in tmp_path.iterdir() if p.is_file()}
        assert before == after


class TestConfigFile:
    def test_toml_config_drives_run(self, scenario3_repo, tmp_path):
        config = tmp_path / "run.toml"
        out_dir = tmp_path / "out"
        config.write_text(
            f"""
repo = "{scenario3_repo}"
out_dir = "{out_dir}"
threshold = 0.05
extensions = [".java"]

[[window]]
name = "1.0"
ref = "r1"

[[window]]
name = "2.0"
ref = "r2"
predecessor = "r1"
""",
            encoding="utf-8",
        )
        assert run_cli("mine", "--config", config) == 0
        assert (out_dir / "snapshot_1.0.json").exists()
        assert (out_dir / "snapshot_2.0.json").exists()

    def test_cli_flag_overrides_config(self, scenario3_repo, tmp_path):
        config = tmp_path / "run.toml"
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        config.write_text(
            f'repo = "{scenario3_repo}"\nout_dir = "{out_a}"\n\n'
            '[[window]]\nname = "1.0"\nref = "r1"\n',
            encoding="utf-8",
        )
        assert run_cli("mine", "--config", config, "--out-dir", out_b) == 0
        assert (out_b / "snapshot_1.0.json").exists()
        assert not (out_a / "snapshot_1.0.json").exists()

    def test_bad_threshold_exits_2(self, scenario1_repo, tmp_path):
        code = run_cli(
            "mine", "--repo", scenario1_repo, "--out-dir", tmp_path,
            "--window", "1.0=..r1", "--threshold", "1.5",
        )
        assert code == 2


def test_version_prints_version(capsys):
    assert run_cli("version") == 0
    from ownlens import __version__

    assert capsys.readouterr().out.strip() == __version__
