import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from sawsis.cli import main, stream
from sawsis.lattice import Walk
from sawsis.samplers import recompute_trace


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_moments_example(capsys):
    code, out, _ = run(capsys, "moments", "--model", "nes", "--k", "2", "--lmax", "2")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert [(r["l"], int(r["first_moment_sq"]), int(r["second_moment"])) for r in rows] == \
        [(1, 9, 10), (2, 81, 96)]


def test_moments_csv(capsys):
    code, out, _ = run(capsys, "moments", "--model", "directed", "--lmax", "3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["second_moment"] for r in rows] == ["4", "40", "496"]
    assert [r["first_moment_sq"] for r in rows] == ["4", "36", "400"]


def test_enumerate_example(capsys):
    code, out, _ = run(capsys, "enumerate", "--model", "crossing", "--k", "2")
    doc = json.loads(out)
    assert code == 0
    assert (doc["count"], doc["weighted_sum"]) == ("12", "152")


def test_enumerate_nes_and_directed(capsys):
    _, out, _ = run(capsys, "enumerate", "--model", "nes", "--k", "2", "--l", "2")
    assert json.loads(out)["weighted_sum"] == "96"
    _, out, _ = run(capsys, "enumerate", "--model", "directed", "--k", "2")
    assert json.loads(out)["weighted_sum"] == "40"


def test_sample_round_trip(capsys):
    for model, extra in [("crossing", ["--k", "5"]), ("nes", ["--k", "3", "--l", "4"]),
                         ("directed", ["--k", "6"]), ("untrapped", ["--length", "40"])]:
        code, out, _ = run(capsys, "sample", "--model", model, *extra, "--n", "20", "--seed", "3")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 20
        for line in lines:
            d = json.loads(line)
            params = {"k": 5} if model == "crossing" else {}
            if model == "nes":
                params = {"k": 3, "l": 4}
            if model == "directed":
                params = {"k": 6}
            trace = recompute_trace(Walk.from_string(d["steps"]), model, **params)
            assert (trace.a, trace.b) == (d["a"], d["b"])
            assert str(trace.weight) == d["weight"]


def test_determinism(capsys):
    argv = ["sample", "--model", "crossing", "--k", "6", "--n", "30", "--seed", "17", "--threads", "1"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    _, c, _ = run(capsys, *argv[:-3], "18", "--threads", "1")
    assert a != c


def test_threads_reproducible(capsys):
    argv = ["estimate", "--model", "crossing", "--k", "4", "--n", "200", "--seed", "5", "--threads", "2"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    assert json.loads(a)["samples"] == 200


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("SAWSIS_THREADS", "2")
    _, out, _ = run(capsys, "estimate", "--model", "directed", "--k", "3", "--n", "10")
    assert json.loads(out)["threads"] == 2
    monkeypatch.setenv("SAWSIS_THREADS", "zero")
    code, _, err = run(capsys, "estimate", "--model", "directed", "--k", "3")
    assert code == 1 and "SAWSIS_THREADS" in err


def test_estimate_fields(capsys):
    code, out, _ = run(capsys, "estimate", "--model", "crossing", "--k", "3", "--n", "500", "--seed", "1")
    d = json.loads(out)
    assert code == 0
    assert "e+" in d["mean"]
    assert 100 < float(d["mean"]) < 300
    assert float(d["std_error"]) > 0
    assert d["relative_variance_estimate"] > 0
    assert int(d["sum_weights"]) / 500 == pytest.approx(float(d["mean"]), rel=1e-5)


def test_stream_independent():
    assert stream(1, 0).random() != stream(1, 1).random()
    assert stream(1, 0).random() == stream(1, 0).random()


@pytest.mark.parametrize("argv", [
    [],
    ["sample"],
    ["sample", "--model", "nes", "--k", "2"],
    ["sample", "--model", "crossing", "--k", "0"],
    ["sample", "--model", "crossing", "--k", "2", "--seed", "-1"],
    ["sample", "--model", "crossing", "--k", "2", "--seed", str(2 ** 64)],
    ["moments", "--model", "crossing", "--k", "2", "--lmax", "2"],
    ["enumerate", "--model", "untrapped", "--k", "2"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err
    assert out == ""


def test_limit_exit_code(capsys):
    code, _, err = run(capsys, "enumerate", "--model", "crossing", "--k", "6")
    assert code == 2 and "limit" in err
    code, _, _ = run(capsys, "enumerate", "--model", "nes", "--k", "9", "--l", "9", "--limit", "100")
    assert code == 2
    code, _, _ = run(capsys, "bounds", "--kmax", "7")
    assert code == 2


def test_bounds(capsys):
    _, out, _ = run(capsys, "bounds", "--kmax", "2")
    d = json.loads(out)
    assert d["lambda_lb"] == pytest.approx(12 ** (1 / 9))
    assert d["table"][1] == {"k": 2, "c": "12", "d": "152"}
    _, out, _ = run(capsys, "bounds", "--kmax", "3", "--format", "csv")
    assert out.splitlines()[0] == "k,c,d,lambda_lb,beta_lb"


def test_asymptotics(capsys):
    _, out, _ = run(capsys, "asymptotics", "--k", "2", "--kmax", "3")
    rows = json.loads(out)["rows"]
    assert [r["k"] for r in rows] == [2, 3]
    assert rows[0]["rho"].startswith("0.10391256382996653")


def test_render_svg(capsys, tmp_path):
    path = tmp_path / "walks.svg"
    code, out, _ = run(capsys, "render", "--model", "crossing", "--k", "2", "--all", "--svg", str(path))
    assert code == 0
    assert json.loads(out)["walks"] == 12
    root = ET.parse(path).getroot()
    assert len(root.findall(".//{http://www.w3.org/2000/svg}polyline")) == 12
    code, out, _ = run(capsys, "render", "--model", "untrapped", "--length", "30", "--n", "4")
    assert code == 0 and out.startswith("<?xml")
    code, _, _ = run(capsys, "render", "--model", "untrapped", "--all")
    assert code == 1


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sawsis", "enumerate", "--model", "crossing", "--k", "1"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["count"] == "2"
