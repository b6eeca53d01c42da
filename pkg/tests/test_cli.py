import csv
import io
import json
import os

import pytest

from recipmatch import dump_instance
from recipmatch.cli import main

from conftest import instance_i1, make_instance


@pytest.fixture()
def i1_path(tmp_path):
    path = tmp_path / "i1.json"
    path.write_text(dump_instance(instance_i1()))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_prints_matching_lines(self, capsys, i1_path):
        code, out, _ = run_cli(capsys, "solve", "--instance", i1_path)
        assert code == 0
        assert out.splitlines() == ["s1,c1", "s2,c2", "s3,-"]

    def test_env_seed_override(self, capsys, i1_path, monkeypatch):
        monkeypatch.setenv("MATCH_SEED", "99")
        code, out, _ = run_cli(capsys, "solve", "--instance", i1_path, "--seed", "0")
        assert code == 0
        assert out.splitlines() == ["s1,c1", "s2,c2", "s3,-"]  # I1 is lottery-free


class TestOracle:
    def test_lists_stable_matchings_and_flags_optimal(self, capsys, i1_path):
        code, out, _ = run_cli(capsys, "oracle", "--instance", i1_path)
        assert code == 0
        assert out.startswith("stable matchings: 1")
        assert "(student-optimal)" in out
        assert "s3,-" in out


class TestAudit:
    def test_emits_csv_and_verdict(self, capsys, i1_path):
        code, out, err = run_cli(capsys, "audit", "--instance", i1_path, "--college", "c1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "seed,college,strategy_id,dropped_count,improved"
        assert len(lines) == 1 + 2 ** 3  # three listed students
        assert "truthful reporting is optimal" in err


class TestRun:
    def test_welfare_sweep_writes_files(self, capsys, tmp_path):
        out_dir = str(tmp_path / "out")
        code, _, err = run_cli(
            capsys, "run", "welfare-sweep", "--out", out_dir,
            "--trials", "5", "--beta-step", "0.5", "--seed", "3",
        )
        assert code == 0
        with open(os.path.join(out_dir, "welfare.csv")) as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["beta", "mechanism", "mean_piS", "se_piS",
                           "mean_piC", "se_piC", "mean_Pi", "se_Pi"]
        assert len(rows) == 1 + 3 * 2
        with open(os.path.join(out_dir, "welfare_trials.csv")) as f:
            trials = list(csv.DictReader(f))
        assert len(trials) == 3 * 2 * 5
        assert {t["seed"] for t in trials} == {"3"}
        meta = json.load(open(os.path.join(out_dir, "run.json")))
        assert meta["kind"] == "welfare-sweep"
        assert meta["seed"] == 3

    def test_single_mechanism_flag(self, capsys, tmp_path):
        out_dir = str(tmp_path / "out")
        code, _, _ = run_cli(
            capsys, "run", "welfare-sweep", "--out", out_dir,
            "--trials", "2", "--beta-step", "1.0", "--mechanism", "gs",
        )
        assert code == 0
        with open(os.path.join(out_dir, "welfare.csv")) as f:
            rows = list(csv.DictReader(f))
        assert {r["mechanism"] for r in rows} == {"gs"}

    def test_strategy_count_flag_restricts_k(self, capsys, tmp_path):
        out_dir = str(tmp_path / "out")
        code, _, _ = run_cli(
            capsys, "run", "strategy-count", "--out", out_dir,
            "--trials", "3", "--strategic-count", "2",
        )
        assert code == 0
        with open(os.path.join(out_dir, "strategy.csv")) as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["k", "mean_u_strategic", "se", "mean_u_truthful", "se",
                           "piS", "piC_submitted", "piC_true"]
        assert len(rows) == 2 and rows[1][0] == "2"

    def test_replay_prints_trial_rows(self, capsys, tmp_path):
        out_dir = str(tmp_path / "out")
        run_cli(capsys, "run", "per-rank", "--out", out_dir, "--trials", "4", "--seed", "11")
        with open(os.path.join(out_dir, "per_rank_trials.csv")) as f:
            want = [r for r in csv.DictReader(f) if r["trial"] == "2"]
        code, out, _ = run_cli(capsys, "run", "per-rank", "--replay", "11:2", "--trials", "4")
        assert code == 0
        got = list(csv.DictReader(io.StringIO(out)))
        assert got == want

    def test_config_file_feeds_the_generator(self, capsys, tmp_path):
        cfg = tmp_path / "gen.json"
        cfg.write_text('{"n_students": 6, "n_colleges": 5, "seed": 1}')
        out_dir = str(tmp_path / "out")
        code, _, _ = run_cli(
            capsys, "run", "strategy-count", "--config", str(cfg), "--out", out_dir,
            "--trials", "2",
        )
        assert code == 0
        with open(os.path.join(out_dir, "strategy.csv")) as f:
            rows = list(csv.reader(f))
        assert len(rows) == 1 + 7  # k ranges 0..6 for six students


def test_unknown_instance_path_raises(capsys):
    with pytest.raises(FileNotFoundError):
        main(["solve", "--instance", "/nonexistent/file.json"])
