import io
import json
import subprocess
import sys

import pytest

from tripadic.cli import run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_qexp_eisenstein():
    code, out, _ = run("qexp", "--eisenstein", "4", "--trunc", "3")
    assert code == 0
    assert json.loads(out)["coefficients"] == ["1", "240", "2160", "6720"]


def test_qexp_csv():
    code, out, _ = run("qexp", "--trunc", "3", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("n")


def test_slopes_of_delta():
    code, out, _ = run("slopes")
    d = json.loads(out)
    assert code == 0 and d["slopes"] == ["1", "10"]


def test_slopes_from_matrix():
    code, out, _ = run("slopes", "--matrix", "7,0;0,1")
    assert code == 0 and json.loads(out)["slopes"] == ["0", "1"]


def test_project():
    code, out, _ = run("project", "--matrix", "2,1;0,3", "--lambda", "3")
    d = json.loads(out)
    assert code == 0 and d["dimension"] == 1


def test_siegel_coeff_reports_local_polynomials():
    code, out, _ = run("siegel-coeff", "--S", "2,1,1;1,2,1;1,1,2", "--k", "4")
    assert code == 0 and json.loads(out)["local"] == {"2": [1, -4]}


def test_stabilized_output_declares_padic_ring():
    code, out, _ = run("stabilize", "--trunc", "14")
    assert code == 0 and json.loads(out)["f0"]["ring"] == "Zp"


def test_admissible_check_and_corruption():
    assert run("admissible-check")[0] == 0
    assert run("admissible-check", "--corrupt", "1,2,7")[0] == 2  # 7 is not a unit at p = 7
    code, out, _ = run("admissible-check", "--p", "5", "--corrupt", "1,2,7")
    fails = json.loads(out)["failures"]
    assert code == 4 and {(f["a"], f["v"]) for f in fails} == {(7, 2)}


def test_mellin_precision_failure_exits_3():
    assert run("mellin", "--p", "5", "--k", "3", "--v", "2")[0] == 0
    assert run("mellin", "--p", "5", "--k", "3", "--v", "2", "--target", "30")[0] == 3


@pytest.mark.parametrize("argv,code", [
    (["qexp", "--bogus"], 2),
    (["siegel-coeff", "--S", "1,0;0"], 2),
    (["project", "--format", "csv", "--matrix", "1", "--lambda", "1"], 2),
    (["stabilize", "--trunc", "3"], 3),
    (["qexp", "--p", "4"], 3),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_out_file(tmp_path):
    target = tmp_path / "e4.json"
    assert run("qexp", "--eisenstein", "4", "--trunc", "2", "--out", str(target))[0] == 0
    assert json.loads(target.read_text())["weight"] == 4


def test_twist_then_pullback_through_files(tmp_path):
    code, out, _ = run("twist", "--k", "4", "--trace", "3", "--char", "5:2", "--char", "1", "--char", "1")
    assert code == 0
    src = tmp_path / "twisted.json"
    src.write_text(out)
    code, out, _ = run("pullback", "--in", str(src), "--weights", "4,4,4")
    assert code == 0 and json.loads(out)["kind"] == "triple"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "tripadic", "qexp", "--trunc", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["kind"] == "qexp"
