import json
import subprocess
import sys

import pytest

from tslab.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_example(capsys):
    code, out, _ = call(capsys, "norm", "--spec", "tsirelson:2", "--vector", '{"coords":{"3":1,"4":1,"5":1}}')
    assert code == 0 and json.loads(out) == {"value": "3/2"}


def test_norm_oracle_matches(capsys):
    vec = '{"coords":{"2":"1/2","3":-1,"5":2,"6":1}}'
    a = call(capsys, "norm", "--spec", "tsirelson:3", "--vector", vec)
    b = call(capsys, "norm", "--spec", "tsirelson:3", "--vector", vec, "--oracle")
    assert a == b and a[0] == 0


def test_limit_norm(capsys):
    code, out, _ = call(capsys, "limit-norm", "--vector", '{"coords":{"3":1,"4":1,"5":1}}')
    assert code == 0 and json.loads(out)["value"] == "3/2"
    code, out, _ = call(capsys, "limit-norm", "--vector", '{"coords":{"3":1,"4":1,"5":1}}', "--rows", "tsirelson:0..5")
    obj = json.loads(out)
    assert code == 0 and obj["limit"] == "3/2"


def test_phi_and_distortion(capsys):
    code, out, _ = call(capsys, "phi", "--num", "sup", "--den", "sup", "--dim", "3")
    assert code == 0 and json.loads(out) == {"value": 1.0, "D": "1"}
    code, out, _ = call(capsys, "distortion", "--num", "tsirelson:1", "--den", "tsirelson:0", "--dim", "5")
    assert json.loads(out)["D"] == "3/2"


def test_growth_csv(capsys):
    code, out, _ = call(capsys, "growth", "--num", "tsirelson:1", "--den", "tsirelson:0", "--dim", "3..5", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "dim,D_num,D_den,D_value"
    assert lines[-1] == "5,tsirelson:1,tsirelson:0,3/2"


def test_gap_and_probe(capsys):
    code, out, _ = call(capsys, "gap", "--rows", "tsirelson:0..4", "--cols", "tsirelson:0..4", "--dim", "6", "--tolerance", "0.01")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "order-property-witnessed" and rep["sup_upper"] == 1.0
    code, out, _ = call(capsys, "probe", "--matrix", "[[0,1,1,1],[0,0,1,1],[0,0,0,1],[0,0,0,0]]")
    assert code == 0 and json.loads(out)["disagreement"] == 1.0


def test_matrix_and_norming_set(capsys):
    code, out, _ = call(capsys, "matrix", "--rows", "sup*2", "--cols", "sup*2", "--dim", "2", "--format", "csv")
    assert code == 0 and len(out.splitlines()) == 3
    code, out, _ = call(capsys, "norming-set", "--spec", "l1", "--dim", "3")
    assert json.loads(out)["functionals"] == [{"1": "1", "2": "1", "3": "1"}]


def test_witness(capsys):
    code, out, _ = call(capsys, "witness", "--num", "tsirelson:1", "--den", "tsirelson:0", "--target", "3/2")
    obj = json.loads(out)
    assert code == 0 and obj["vector"] == {"coords": {"3": "1", "4": "1", "5": "1"}}


@pytest.mark.parametrize(
    "argv, code, tag",
    [
        (["norm", "--spec", "bogus", "--vector", '{"coords":{"1":1}}'], 2, "usage error"),
        (["norm", "--spec", "sup", "--vector", '{"coords":{"1":0.5}}'], 2, "usage error"),
        (["norm", "--spec", "sup"], 2, ""),
        (["frobnicate"], 2, ""),
        (["phi", "--num", "tsirelson:0", "--den", "tsirelson:1", "--dim", "5"], 0, ""),
        (["norming-set", "--spec", "tsirelson:2", "--dim", "99"], 1, "dimension-bound-exceeded"),
        (["norming-set", "--spec", "lp:2", "--dim", "3"], 1, "unsupported-spec"),
        (["gap", "--matrix", "[[1]]"], 1, "insufficient-data"),
        (["norm", "--spec", "tsirelson:2", "--vector", '{"coords":{"1":1,"2":1,"3":1,"4":1,"5":1,"6":1,"7":1,"8":1,"9":1}}', "--oracle"], 1, "oracle-bound-exceeded"),
    ],
)
def test_exit_codes(capsys, argv, code, tag):
    got, _, err = call(capsys, *argv)
    assert got == code
    assert tag in err


def test_reproduce_writes_report(capsys, tmp_path):
    code, out, _ = call(capsys, "reproduce", "analysisCI", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["passed"] is True
    assert json.loads((tmp_path / "analysisCI.json").read_text())["target"] == "analysisCI"


def test_console_script_is_deterministic():
    argv = [sys.executable, "-m", "tslab.cli", "gap", "--rows", "tsirelson:0..3", "--cols", "tsirelson:0..3", "--dim", "5"]
    runs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1] and runs[0]
