import io
import json
import subprocess
import sys

from mahonia import cli, permstat
from mahonia.forest import maj_distribution, make_rake
from mahonia.qpoly import IntPolynomial, bracket

R74_JSON = '{"n":7,"parent":{"1":5,"2":5,"3":5,"4":5,"5":6,"6":7}}'


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def poly_of(text):
    return IntPolynomial.from_json(text)


def test_dist_snk_example():
    code, out = run("dist", "--family", "snk", "--n", "3", "--k", "2", "--signed")
    assert code == 0
    q = IntPolynomial.variable("q", ("q", "z"))
    z = IntPolynomial.variable("z", ("q", "z"))
    assert poly_of(out) == z - q * z + q**2
    assert out == (z - q * z + q**2).to_json() + "\n"


def test_dist_fmaj_example():
    code, out = run("dist", "--family", "fmaj-ck", "--r", "2", "--p", "1", "--n", "2", "--k", "1")
    assert code == 0 and poly_of(out) == bracket(4)


def test_dist_bad_k():
    assert run("dist", "--family", "snk", "--n", "3", "--k", "9")[0] == 2
    assert run("dist", "--family", "rake", "--n", "3", "--k", "3")[0] == 2
    assert run("dist", "--family", "fmaj-ck", "--r", "3", "--p", "2", "--n", "2")[0] == 2
    assert run("dist", "--family", "nope", "--n", "3")[0] == 2
    assert run("dist", "--family", "snk")[0] == 2


def test_dist_vars_marginal():
    code, out = run("dist", "--family", "snk", "--n", "4", "--k", "1", "--signed", "--vars", "q")
    assert code == 0
    assert poly_of(out) == bracket(2, -1) * bracket(3) * bracket(4, -1)
    assert run("dist", "--family", "snk", "--n", "4", "--k", "1", "--vars", "t")[0] == 2


def test_dist_matches_library():
    for n, k in [(5, 2), (6, 3)]:
        _, out = run("dist", "--family", "snk-prime", "--n", str(n), "--k", str(k), "--signed")
        assert poly_of(out) == permstat.signed_distribution_prime(n, k)


def test_dist_forest_inline_and_file(tmp_path):
    code, out = run("dist", "--family", "forest", "--forest", R74_JSON)
    assert code == 0 and poly_of(out) == maj_distribution(make_rake(7, 4))
    path = tmp_path / "rake.json"
    path.write_text(R74_JSON)
    assert run("dist", "--family", "forest", "--forest", str(path))[1] == out
    code, out = run("dist", "--family", "forest", "--forest", R74_JSON, "--label", "1,2,3,4,5,6,7")
    assert code == 0 and poly_of(out) == bracket(2) * bracket(3) * bracket(4)
    assert run("dist", "--family", "forest", "--forest", str(tmp_path / "missing.json"))[0] == 2
    assert run("dist", "--family", "forest", "--forest", R74_JSON, "--label", "1,1,2,3,4,5,6")[0] == 2


def test_dist_csv():
    code, out = run("dist", "--family", "snk", "--n", "3", "--k", "2", "--signed", "--format", "csv")
    assert code == 0
    assert out == "q,z,coefficient\n0,1,1\n1,1,-1\n2,0,1\n"


def test_verify_examples():
    code, out = run("verify", "--identity", "cormain", "--n-max", "6")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 21
    assert all(json.loads(line)["equal"] for line in lines)
    code, out = run("verify", "--identity", "grpn", "--r", "2,3,4", "--n-max", "4")
    assert code == 0
    assert all(json.loads(line)["equal"] for line in out.splitlines())
    assert run("verify", "--identity", "bogus")[0] == 2


def test_verify_csv():
    code, out = run("verify", "--identity", "gessel-simion", "--n-max", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "identity,params,equal,asserted,lhs,rhs"
    assert len(out.splitlines()) == 4


def test_verify_exit_1_on_failure(monkeypatch):
    def broken(g):
        yield {"n": 1}, IntPolynomial.constant(1), IntPolynomial.constant(2)
    monkeypatch.setitem(cli.identities.IDENTITIES, "broken", broken)
    assert run("verify", "--identity", "broken")[0] == 1


def test_scan_problem1():
    code, out = run("scan", "--conjecture", "problem1", "--n-max", "1")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 1 and rows[0]["equal"] is True
    code, out = run("scan", "--conjecture", "problem1", "--n-max", "5", "--format", "csv")
    assert code == 0 and out.startswith("n,k,equal,predicted,prime,snk\n")


def test_scan_problem2():
    code, out = run("scan", "--conjecture", "problem2", "--r", "2", "--n-max", "4")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert {(r["n"], r["k"]) for r in rows} == {(n, k) for n in range(1, 5) for k in range(n)}
    assert all(r["r"] == 2 and "signed" in r for r in rows)
    assert run("scan", "--conjecture", "problem3")[0] == 2


def test_output_independent_of_jobs():
    a = run("dist", "--family", "snk", "--n", "7", "--k", "2", "--signed", "--jobs", "1")
    b = run("dist", "--family", "snk", "--n", "7", "--k", "2", "--signed", "--jobs", "3")
    assert a == b
    a = run("verify", "--identity", "main", "--n-max", "6", "--jobs", "1")
    b = run("verify", "--identity", "main", "--n-max", "6", "--jobs", "2")
    assert a == b


def test_budget(monkeypatch):
    assert run("dist", "--family", "snk", "--n", "8", "--k", "1", "--budget", "1000")[0] == 3
    assert run("dist", "--family", "snk", "--n", "3", "--k", "1", "--budget", "0")[0] == 2
    monkeypatch.setenv("MAHONIA_BUDGET", "100")
    assert run("dist", "--family", "snk", "--n", "6", "--k", "1")[0] == 3
    assert run("dist", "--family", "snk", "--n", "4", "--k", "1")[0] == 0


def test_usage_errors():
    assert run()[0] == 2
    assert run("dist")[0] == 2
    assert run("verify", "--identity", "cormain", "--r", "x")[0] == 2
    assert run("verify", "--identity", "cormain", "--n-max", "1", "--n-min", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mahonia", "dist", "--family", "snk", "--n", "3", "--k", "9"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "mahonia", "dist", "--family", "snk", "--n", "3", "--k", "2", "--signed"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith('{"vars":["q","z"]')
