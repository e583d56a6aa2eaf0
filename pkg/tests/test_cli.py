import json
import math
import os
import subprocess
import sys

from padent.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def check_padic_json(doc):
    assert set(doc) == {"p", "v", "unit_digits", "K"}
    assert isinstance(doc["p"], int)
    assert doc["v"] is None or isinstance(doc["v"], int)
    assert isinstance(doc["unit_digits"], list)


def check_convergence_json(doc):
    for key in ("levels", "extrapolated", "agreement_depth", "cauchy"):
        assert key in doc
    for lvl in doc["levels"]:
        assert set(lvl) >= {"index", "value", "raw_log"}
        check_padic_json(lvl["value"])
        check_padic_json(lvl["raw_log"])
    if doc["extrapolated"] is not None:
        check_padic_json(doc["extrapolated"])
    assert isinstance(doc["cauchy"], bool)


class TestExpansiveCommand:
    def test_exponent_zero_exit(self, capsys):
        code, out = run_cli(["expansive", "--p", "2", "t - 2"], capsys)
        assert code == 0 and "ExpansiveExponentZero" in out

    def test_not_expansive_exit(self, capsys):
        code, out = run_cli(["expansive", "--p", "3", "t - 2"], capsys)
        assert code == 3 and "NotExpansive" in out

    def test_three_terms(self, capsys):
        code, _ = run_cli(["expansive", "--p", "2", "t^2 + t + 1"], capsys)
        assert code == 3

    def test_classical_mode(self, capsys):
        code, _ = run_cli(["expansive", "t - 2"], capsys)
        assert code == 0

    def test_inconclusive_exit(self, capsys):
        code, _ = run_cli(["expansive", "2t^2 - 3t + 2"], capsys)
        assert code == 4

    def test_parse_error_exit(self, capsys):
        assert main(["expansive", "--p", "2", "x + garbage"]) == 2

    def test_json_schema(self, capsys):
        code, out = run_cli(["expansive", "--p", "2", "t - 2", "--format", "json"], capsys)
        doc = json.loads(out)
        assert doc["kind"] == "ExpansiveExponentZero" and "witness" in doc


class TestEulerCommand:
    def test_f4_column_of_ones(self, capsys, tmp_path):
        from padent.quotients import koszul_resolution
        from padent.laurent import parse_poly
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        path = tmp_path / "f4.json"
        path.write_text(json.dumps(res.to_json()))
        code, out = run_cli(["euler", "--resolution", str(path),
                             "--seq", "diag:n=1..5:scale=3", "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and [r["chi"] for r in doc["levels"]] == ["1"] * 5

    def test_principal_column(self, capsys):
        code, out = run_cli(["euler", "--poly", "4 - 3*t", "--levels", "6",
                             "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert [r["chi"] for r in doc["levels"]] == [str(4 ** n - 3 ** n) for n in range(1, 7)]

    def test_all_levels_infinite_exit(self, capsys):
        code, _ = run_cli(["euler", "--poly", "t - 1", "--levels", "3"], capsys)
        assert code == 5


class TestPadicEntropyCommand:
    def test_principal(self, capsys):
        code, out = run_cli(["padic-entropy", "--p", "3", "--poly", "4 - 3*t",
                             "--levels", "12", "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0 and doc["cauchy"] is True
        assert doc["estimate"]["v"] == 1
        for lvl in doc["levels"]:
            assert set(lvl) == {"index", "chi", "fixed_points", "value"}

    def test_f4_zero(self, capsys):
        from padent.quotients import koszul_resolution
        from padent.laurent import parse_poly
        import tempfile
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(res.to_json(), fh)
            path = fh.name
        try:
            code, out = run_cli(["padic-entropy", "--p", "5", "--resolution", path,
                                 "--seq", "diag:n=1..6:scale=3", "--format", "json"], capsys)
        finally:
            os.unlink(path)
        doc = json.loads(out)
        assert code == 0 and doc["estimate"]["v"] is None

    def test_fixed_points_mode_non_cauchy(self, capsys, tmp_path):
        from padent.quotients import koszul_resolution
        from padent.laurent import parse_poly
        res = koszul_resolution([parse_poly("2"), parse_poly("t^2 + t + 1")])
        path = tmp_path / "f4.json"
        path.write_text(json.dumps(res.to_json()))
        code, out = run_cli(["padic-entropy", "--p", "5", "--resolution", str(path),
                             "--seq", "diag:n=1..6:scale=3", "--fixed-points",
                             "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 6 and doc["cauchy"] is False
        check_convergence_json(doc)


class TestOtherCommands:
    def test_mahler(self, capsys):
        code, out = run_cli(["mahler", "t - 2"], capsys)
        assert code == 0 and abs(float(out.strip()) - math.log(2)) < 1e-10

    def test_compare(self, capsys):
        code, out = run_cli(["compare", "--p", "2", "t - 2", "--levels", "8",
                             "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert abs(doc["mahler"] - math.log(2)) < 1e-10
        assert doc["padic"]["estimate"]["v"] is None or doc["padic"]["estimate"]["v"] >= 3

    def test_logdet_both_routes(self, capsys):
        code, out = run_cli(["logdet", "--p", "3", "4 - 3*t", "--route", "both",
                             "--levels", "10", "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0
        check_padic_json(doc["series"])
        check_convergence_json(doc["limit"])

    def test_logdet_not_a_unit(self, capsys):
        assert main(["logdet", "--p", "3", "t - 2"]) == 3

    def test_torsion_command(self, capsys):
        code, out = run_cli(["torsion", "--poly", "t - 2", "--levels", "3",
                             "--format", "json"], capsys)
        doc = json.loads(out)
        assert code == 0
        assert all(r["match"] for r in doc["levels"])
        orders = [r["torsion"]["numerator"] for r in doc["levels"]]
        assert orders == [1, 3, 7]


class TestDeterminism:
    def test_byte_identical_across_thread_settings(self):
        env = dict(os.environ)
        cmd = [sys.executable, "-m", "padent.cli", "padic-entropy", "--p", "3",
               "--poly", "4 - 3*t", "--levels", "8", "--format", "json"]
        outs = []
        for threads in ("1", "4"):
            env["PADENT_THREADS"] = threads
            proc = subprocess.run(cmd, capture_output=True, env=env, cwd=os.path.dirname(__file__))
            assert proc.returncode == 0, proc.stderr
            outs.append(proc.stdout)
        assert outs[0] == outs[1]

    def test_repeat_runs_identical(self, capsys):
        argv = ["logdet", "--p", "2", "t - 2", "--route", "both", "--levels", "6",
                "--format", "json"]
        _, out1 = run_cli(argv, capsys)
        _, out2 = run_cli(argv, capsys)
        assert out1 == out2
