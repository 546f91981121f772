import os

import pytest

from kinkline.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestListFunctions:
    def test_nineteen_lines(self, capsys):
        code, out, _ = run_cli(capsys, "list-functions")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 19
        assert lines[0].startswith("SU1 ")


class TestMinimize:
    def test_converging_run_exits_zero(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        code, out, _ = run_cli(
            capsys,
            "minimize",
            "--function", "NU2",
            "--algorithm", "dupm",
            "--seed", "3",
            "--trace", str(trace),
        )
        assert code == 0
        assert "converged" in out
        lines = trace.read_text().splitlines()
        assert lines[1] == "iteration,xl1,xm,xr1,d,fm"

    def test_stalling_run_exits_one(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "minimize",
            "--function", "NU3",
            "--algorithm", "supm:0",
            "--bracket",
            "-1.811263,-2.171330,-2.23927,1.820150,2.102197,2.293404,2.334091",
        )
        assert code == 1
        assert "budget_exhausted" in out

    def test_env_seed_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("KINKLINE_SEED", "11")
        code1, out1, _ = run_cli(capsys, "minimize", "--function", "SU1", "--algorithm", "brent")
        monkeypatch.setenv("KINKLINE_SEED", "12")
        code2, out2, _ = run_cli(capsys, "minimize", "--function", "SU1", "--algorithm", "brent")
        assert code1 == code2 == 0
        assert out1 != out2  # different seeds, different brackets


class TestBench:
    def test_nu_suite_csv(self, capsys, tmp_path):
        out_path = tmp_path / "nu.csv"
        code, _, _ = run_cli(
            capsys,
            "bench", "--suite", "nu", "--trials", "2", "--seed", "1",
            "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0].startswith("#")
        assert lines[1] == "Functions,0,0.1,1,10,EUPM,DUPM,Brent,Mifflin"
        assert len(lines) == 2 + 5
        assert all(len(line.split(",")) == 9 for line in lines[2:])

    def test_seed_reproduces_bytes(self, capsys, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            run_cli(
                capsys,
                "bench", "--functions", "NU5", "--trials", "2", "--seed", "4",
                "--out", str(p),
            )
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_skip_mifflin_drops_column_only(self, capsys, tmp_path):
        full, skipped = tmp_path / "full.csv", tmp_path / "skip.csv"
        run_cli(capsys, "bench", "--functions", "NU5", "--trials", "2", "--seed", "4",
                "--out", str(full))
        run_cli(capsys, "bench", "--functions", "NU5", "--trials", "2", "--seed", "4",
                "--skip", "mifflin", "--out", str(skipped))
        frow = full.read_text().splitlines()[2].split(",")
        srow = skipped.read_text().splitlines()[2].split(",")
        assert srow == frow[:-1]

    def test_unknown_flag_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bench", "--nope"])
        assert exc.value.code == 2


class TestSeqexp:
    def test_csv_written(self, capsys, tmp_path):
        out_path = tmp_path / "seq.csv"
        code, _, _ = run_cli(
            capsys, "seqexp", "--bits", "4", "--samples", "20", "--seed", "2",
            "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[1] == "sequence,bits,eupm_rate,golden_rate"
        assert len(lines) == 2 + 16


class TestVerify:
    def test_sequences_check_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--sequences", "--samples", "300", "--seed", "0")
        assert code == 0
        body = [l for l in out.splitlines() if l and not l.startswith("sequence")]
        assert len(body) == 12
        assert all("ok" in line for line in body)

    def test_full_verify_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--samples", "300", "--seed", "0")
        assert code == 0
        assert "five-step contraction" in out and "reflection identities" in out
