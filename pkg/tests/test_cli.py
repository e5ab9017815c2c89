import subprocess
import sys

import pytest

from kronhalton.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestGen:
    def test_van_der_corput_rows(self, capsys):
        code, out, _ = run(capsys, "gen", "--p", "2", "--halton", "X", "--n", "8", "--prec", "3")
        assert code == 0
        rows = [line for line in out.splitlines() if not line.startswith("#")]
        assert len(rows) == 8
        floats = [float(r.split(",")[2]) for r in rows]
        assert floats == [0.0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875]

    def test_hybrid_prefix(self, capsys):
        code, out, _ = run(capsys, "gen", "--p", "2", "--kronecker", "gap2", "--halton", "X",
                           "--n", "8", "--prec", "24")
        assert code == 0
        rows = [line.split(", ") for line in out.splitlines() if not line.startswith("#")]
        assert rows[1][1].startswith("1001000001")
        assert rows[1][3] == "1" + "0" * 23
        assert "# precision=24" in out

    def test_coprimality_violation(self, capsys):
        code, _, err = run(capsys, "gen", "--p", "2", "--halton", "X", "--halton", "X", "--n", "4")
        assert code == 2 and "error" in err

    def test_bad_prime(self, capsys):
        assert run(capsys, "gen", "--p", "4", "--halton", "X", "--n", "4")[0] == 2

    def test_deterministic(self, capsys):
        argv = ["gen", "--kronecker", "random:5", "--n", "20", "--prec", "12"]
        assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


class TestCF:
    def test_gap(self, capsys):
        code, out, _ = run(capsys, "cf", "--p", "2", "--series", "gap2", "--terms", "6")
        assert code == 0
        assert "quotients=X,X^2,X,X^2,X,X^2" in out.splitlines()

    def test_rational(self, capsys):
        code, out, _ = run(capsys, "cf", "--p", "2", "--series", "rational:X+1/X^2")
        assert code == 0
        assert "quotients=X+1,X+1" in out.splitlines()

    def test_zero_series(self, capsys):
        assert run(capsys, "cf", "--p", "2", "--series", "rational:0/1")[0] == 2

    def test_not_enough_quotients(self, capsys):
        code, _, err = run(capsys, "cf", "--series", "gap2", "--terms", "30", "--max-coeff", "16")
        assert code == 3 and "certified" in err


class TestVerify:
    def test_thm3(self, capsys):
        code, out, _ = run(capsys, "verify", "thm3", "--level", "2")
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "count=0 expected_empty=true lower_bound=16 N=512"
        assert lines[-1] == "PASS"

    def test_example2(self, capsys):
        code, out, _ = run(capsys, "verify", "example2", "--mmax", "10")
        assert code == 0 and out.splitlines()[-1] == "PASS"

    def test_prop1(self, capsys):
        code, out, _ = run(capsys, "verify", "prop1", "--series", "gap2", "--B", "X", "--mmax", "12")
        assert code == 0 and "t_claim=2" in out.splitlines()[0]

    def test_failing_experiment(self, capsys):
        # 1/(X^9+X+1) has a degree-9 first quotient, so 256 points leave
        # a large gap and the ratio exceeds the frozen gap-series constant
        code, out, _ = run(capsys, "verify", "thm2", "--series", "rational:1/X^9+X+1",
                           "--nlist", "256,512,1024,2048,4096")
        assert code == 1 and out.splitlines()[-1] == "FAIL"

    def test_out_of_scope(self, capsys):
        assert run(capsys, "verify", "prop1", "--series", "rational:1/X^3+X+1")[0] == 2

    def test_level_out_of_range(self, capsys):
        assert run(capsys, "verify", "thm3", "--level", "4")[0] == 2

    def test_resource_limit(self, capsys):
        code, _, _ = run(capsys, "verify", "thm2", "--nlist", "64", "--cap", "32")
        assert code == 3

    def test_csv_output(self, capsys, tmp_path):
        path = tmp_path / "rows.csv"
        code, _, _ = run(capsys, "verify", "nets", "--mmax", "4", "--csv", str(path))
        assert code == 0
        assert path.read_text().splitlines()[0] == "m,halton_t0,gap2_T,gap2_net,gap2_tight"


class TestDisc:
    def test_vdc_file(self, capsys, tmp_path):
        path = tmp_path / "points.csv"
        assert run(capsys, "gen", "--halton", "X", "--n", "4", "--prec", "4", "--out", str(path))[0] == 0
        code, out, _ = run(capsys, "disc", "--in", str(path))
        assert code == 0
        assert "disc=1/4 disc_pk=1/2^2 decimal=0.25" in out

    def test_round_trip_is_byte_identical(self, capsys, tmp_path):
        path = tmp_path / "h.csv"
        run(capsys, "gen", "--kronecker", "gap2", "--halton", "X+1", "--n", "64", "--out", str(path))
        from kronhalton.sequences import points_to_csv, read_points_csv

        text = path.read_text()
        with open(path) as fh:
            pts, meta = read_points_csv(fh)
        assert points_to_csv(pts, meta["spec"]) == text
        code, out, _ = run(capsys, "disc", "--in", str(path))
        inline = run(capsys, "disc", "--kronecker", "gap2", "--halton", "X+1", "--n", "64")[1]
        assert code == 0 and out == inline

    def test_empty_file(self, capsys, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        assert run(capsys, "disc", "--in", str(path))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "disc", "--in", str(tmp_path / "nope.csv"))[0] == 2

    def test_normalized_table(self, capsys):
        code, out, _ = run(capsys, "disc", "--p", "2", "--kronecker", "gap2", "--halton", "X",
                           "--nlist", "16,64,256,1024", "--normalize", "sqrtlog")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("N=16 s=2 ")
        assert "ND=5132197/2097152" in lines[0]

    def test_cap_exceeded(self, capsys):
        code, _, err = run(capsys, "disc", "--halton", "X", "--halton", "X+1", "--n", "100", "--cap", "50")
        assert code == 3 and "cap" in err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "kronhalton", "cf", "--series", "cf:X*", "--terms", "3"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "quotients=X,X,X" in out.stdout


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_thread_count_does_not_change_output(capsys):
    argv = ["verify", "lemma4", "--B", "X+1", "--samples", "4000", "--r", "2"]
    single = run(capsys, *argv, "--threads", "1")
    several = run(capsys, *argv, "--threads", "4")
    assert single[0] == several[0] == 0
    assert single[1] == several[1]
