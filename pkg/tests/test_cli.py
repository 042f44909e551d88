from __future__ import annotations

import hashlib
import os
import shutil
import socket
import subprocess
import sys
import time

from pathlib import Path

import pytest
import requests

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "data" / "fixture"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

MAX_F_AF = "max F=0.611 at k=60 (precision=0.667, recall=0.563)"
MAX_F_CHF = "max F=0.503 at k=100 (precision=0.450, recall=0.570)"


def run_cli(*args, env_extra=None, timeout=60):
    env = os.environ.copy()
    env.pop("TRENDEX_DATA_DIR", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "trendex", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
    )


def with_data(*args):
    return run_cli("--data-dir", str(FIXTURE_DIR), *args)


def golden(name):
    return (GOLDEN_DIR / name).read_text(encoding="utf-8")


class TestExtract:
    def test_matches_golden_output(self):
        result = with_data("extract", "--disease", "atrial fibrillation")
        assert result.returncode == 0
        assert result.stdout == golden("extract_af.tsv")

    def test_cui_query_equivalent(self):
        by_name = with_data("extract", "--disease", "atrial fibrillation")
        by_cui = with_data("extract", "--disease", "C0004238")
        assert by_name.stdout == by_cui.stdout

    def test_unknown_disease_exits_2(self):
        result = with_data("extract", "--disease", "unknown syndrome x")
        assert result.returncode == 2
        assert "no disorder found" in result.stdout

    def test_missing_data_file_exits_1(self, tmp_path):
        partial = tmp_path / "data"
        partial.mkdir()
        for name in os.listdir(FIXTURE_DIR):
            if name == "predications.tsv" or (FIXTURE_DIR / name).is_dir():
                continue
            shutil.copy(FIXTURE_DIR / name, partial / name)
        result = run_cli(
            "--data-dir", str(partial), "extract", "--disease", "C0004238"
        )
        assert result.returncode == 1
        assert "predications.tsv" in result.stderr

    def test_console_script_agrees(self):
        script = shutil.which("trendex")
        assert script, "console script not on PATH"
        direct = subprocess.run(
            [script, "--data-dir", str(FIXTURE_DIR), "extract", "--disease", "C0004238"],
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert direct.returncode == 0
        assert direct.stdout == golden("extract_af.tsv")

    def test_data_dir_from_environment(self):
        result = run_cli(
            "extract",
            "--disease",
            "C0004238",
            env_extra={"TRENDEX_DATA_DIR": str(FIXTURE_DIR)},
        )
        assert result.returncode == 0
        assert result.stdout == golden("extract_af.tsv")


class TestRank:
    def test_matches_golden_output(self):
        result = with_data("rank", "--disease", "atrial fibrillation")
        assert result.returncode == 0
        assert result.stdout == golden("rank_af_new.tsv")
        assert result.stdout.splitlines()[1].split("\t")[1] == "C0547070"

    def test_limit_truncates(self):
        result = with_data("rank", "--disease", "C0004238", "--limit", "2")
        lines = result.stdout.splitlines()
        assert len(lines) == 3
        assert lines[0] == "RANK\tCUI\tNAME\tSCORE"

    def test_limit_zero_exits_1(self):
        result = with_data("rank", "--disease", "C0004238", "--limit", "0")
        assert result.returncode == 1
        assert "--limit" in result.stderr

    def test_custom_needs_seven_weights(self):
        result = with_data(
            "rank", "--disease", "C0004238",
            "--profile", "custom", "--weights", "1,2,3,4,5,6",
        )
        assert result.returncode == 1
        assert "usage:" in result.stderr

    def test_custom_without_weights_exits_1(self):
        result = with_data("rank", "--disease", "C0004238", "--profile", "custom")
        assert result.returncode == 1
        assert "--weights" in result.stderr

    def test_custom_ascending_weights_equal_new_profile(self):
        custom = with_data(
            "rank", "--disease", "C0004238",
            "--profile", "custom", "--weights", "1,2,3,4,5,6,7",
        )
        default = with_data("rank", "--disease", "C0004238")
        assert custom.returncode == 0
        assert custom.stdout == default.stdout

    def test_established_profile_reorders(self):
        result = with_data("rank", "--disease", "C0004238", "--profile", "established")
        first = result.stdout.splitlines()[1].split("\t")
        assert first[1] == "C0013778"

    def test_bad_threshold_exits_1(self):
        result = run_cli(
            "--data-dir", str(FIXTURE_DIR), "--threshold", "1.5",
            "rank", "--disease", "C0004238",
        )
        assert result.returncode == 1
        assert "threshold" in result.stderr


class TestEval:
    RANKED = str(FIXTURE_DIR / "eval" / "ranked_af_new.tsv")
    GOLD = str(FIXTURE_DIR / "eval" / "gold_af_new.tsv")

    def test_stdout_report_and_max_f(self):
        result = run_cli("eval", "--ranked", self.RANKED, "--gold", self.GOLD)
        assert result.returncode == 0
        assert result.stdout == golden("eval_af_new.csv") + MAX_F_AF + "\n"

    def test_out_file_matches_golden(self, tmp_path):
        out = tmp_path / "report.csv"
        result = run_cli(
            "eval", "--ranked", self.RANKED, "--gold", self.GOLD, "--out", str(out)
        )
        assert result.returncode == 0
        assert out.read_text(encoding="utf-8") == golden("eval_af_new.csv")
        assert result.stdout == MAX_F_AF + "\n"

    def test_chf_reference_curve(self):
        result = run_cli(
            "eval",
            "--ranked", str(FIXTURE_DIR / "eval" / "ranked_chf_new.tsv"),
            "--gold", str(FIXTURE_DIR / "eval" / "gold_chf_new.tsv"),
        )
        assert result.returncode == 0
        assert result.stdout.strip().endswith(MAX_F_CHF)

    def test_single_cutoff(self):
        result = run_cli(
            "eval", "--ranked", self.RANKED, "--gold", self.GOLD, "--ks", "10"
        )
        lines = result.stdout.splitlines()
        assert lines[0] == "k,hits,precision,recall,f_score"
        assert lines[1].startswith("10,7,")
        assert len(lines) == 3  # header, one row, max-F summary

    def test_unsorted_ks_exit_1(self):
        result = run_cli(
            "eval", "--ranked", self.RANKED, "--gold", self.GOLD, "--ks", "30,10"
        )
        assert result.returncode == 1
        assert "ascending" in result.stderr

    def test_duplicate_gold_warns_but_succeeds(self, tmp_path):
        gold_file = tmp_path / "gold.tsv"
        gold_file.write_text(
            "CUI\tNAME\nC0547070\tAblation\nC0547070\tAblation again\n",
            encoding="utf-8",
        )
        result = run_cli(
            "eval", "--ranked", self.RANKED, "--gold", str(gold_file), "--ks", "10"
        )
        assert result.returncode == 0
        assert "duplicate gold CUI" in result.stderr

    def test_empty_gold_exits_1(self, tmp_path):
        gold_file = tmp_path / "gold.tsv"
        gold_file.write_text("CUI\tNAME\n", encoding="utf-8")
        result = run_cli(
            "eval", "--ranked", self.RANKED, "--gold", str(gold_file)
        )
        assert result.returncode == 1
        assert "empty" in result.stderr

    def test_missing_ranked_file_exits_1(self, tmp_path):
        result = run_cli(
            "eval", "--ranked", str(tmp_path / "absent.tsv"), "--gold", self.GOLD
        )
        assert result.returncode == 1
        assert "error:" in result.stderr

    def test_disease_ranking_against_bundled_gold(self):
        result = with_data(
            "eval",
            "--disease", "atrial fibrillation",
            "--gold", str(FIXTURE_DIR / "gold_af.tsv"),
            "--ks", "1,2,3,4",
        )
        assert result.returncode == 0
        lines = result.stdout.splitlines()
        assert lines[1] == "1,1,1.000000,0.250000,0.400000"
        assert lines[-1] == "max F=0.857 at k=3 (precision=1.000, recall=0.750)"

    def test_synonym_merge_changes_hits(self, tmp_path):
        ranked_file = tmp_path / "ranked.tsv"
        ranked_file.write_text(
            "CUI\tNAME\nC0547070\tAblation\nC0013778\tElectric Countershock\n",
            encoding="utf-8",
        )
        synonyms = tmp_path / "synonyms.tsv"
        synonyms.write_text(
            "CUI\tCANONICAL\nC0162563\tC0547070\n", encoding="utf-8"
        )
        gold_file = tmp_path / "gold.tsv"
        gold_file.write_text("CUI\tNAME\nC0162563\tCardiac Ablation\n", encoding="utf-8")
        merged = run_cli(
            "eval", "--ranked", str(ranked_file), "--gold", str(gold_file),
            "--ks", "2", "--synonyms", str(synonyms),
        )
        plain = run_cli(
            "eval", "--ranked", str(ranked_file), "--gold", str(gold_file), "--ks", "2"
        )
        # The gold CUI is an alias of a ranked one; only the merge sees the hit.
        assert plain.stdout.splitlines()[1].startswith("2,0,")
        assert merged.stdout.splitlines()[1].startswith("2,1,")


class TestServe:
    def test_ephemeral_port_serves_health(self):
        process = subprocess.Popen(
            [
                sys.executable, "-m", "trendex",
                "--data-dir", str(FIXTURE_DIR), "serve", "--port", "0",
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
        try:
            banner = process.stdout.readline().strip()
            assert banner.startswith("listening on http://127.0.0.1:")
            port = int(banner.rsplit(":", 1)[1])
            assert port > 0
            deadline = time.monotonic() + 10
            last_error = None
            while time.monotonic() < deadline:
                try:
                    response = requests.get(
                        f"http://127.0.0.1:{port}/healthz", timeout=1
                    )
                    break
                except requests.ConnectionError as exc:
                    last_error = exc
                    time.sleep(0.1)
            else:
                pytest.fail(f"server never came up: {last_error}")
            assert response.status_code == 200
            assert response.json() == {"status": "ok"}
        finally:
            process.terminate()
            process.wait(timeout=10)

    def test_busy_port_exits_1(self):
        with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as holder:
            holder.bind(("127.0.0.1", 0))
            holder.listen(1)
            busy_port = holder.getsockname()[1]
            result = with_data("serve", "--port", str(busy_port))
        assert result.returncode == 1
        assert "cannot bind" in result.stderr


class TestInputsUntouched:
    def test_commands_do_not_modify_data_files(self, tmp_path):
        def digest_tree():
            digests = {}
            for root, _, files in os.walk(FIXTURE_DIR):
                for name in files:
                    path = os.path.join(root, name)
                    with open(path, "rb") as handle:
                        digests[path] = hashlib.sha256(handle.read()).hexdigest()
            return digests

        before = digest_tree()
        with_data("extract", "--disease", "C0004238")
        with_data("rank", "--disease", "C0004238", "--profile", "established")
        run_cli(
            "eval",
            "--ranked", str(FIXTURE_DIR / "eval" / "ranked_af_new.tsv"),
            "--gold", str(FIXTURE_DIR / "eval" / "gold_af_new.tsv"),
            "--out", str(tmp_path / "report.csv"),
        )
        assert digest_tree() == before
