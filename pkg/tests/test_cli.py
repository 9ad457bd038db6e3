"""Black-box tests of the secm command: exit codes and determinism."""

import json
import math
import subprocess
import sys
import xml.dom.minidom


def run(*args, **kw):
    return subprocess.run([sys.executable, "-m", "secmeasure.cli", *args],
                          capture_output=True, text=True, **kw)


def test_moments_csv():
    r = run("moments", "--density", "cheb-u", "--n", "2")
    assert r.returncode == 0
    lines = r.stdout.strip().split("\n")
    assert lines[0] == "n,c_n"
    assert len(lines) == 4
    assert abs(float(lines[3].split(",")[1]) - 0.25) < 1e-12


def test_json_schema():
    r = run("--format", "json", "reducer", "--density", "cheb-u",
            "--x", "0.25")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["columns"] == ["x", "phi"]
    assert abs(obj["rows"][0][1] - 1.0) < 1e-9
    assert obj["meta"]["density"] == "cheb-u"


def test_ortho_and_secondary_run():
    assert run("ortho", "--density", "uniform", "--n", "3").returncode == 0
    r = run("--format", "json", "secondary", "--density", "cheb-u",
            "--grid", "3")
    assert r.returncode == 0
    assert abs(json.loads(r.stdout)["meta"]["d0"] - 0.25) < 1e-10


def test_family_density_and_scan():
    r = run("family", "density", "--density", "cheb-u", "--t", "2",
            "--grid", "3")
    assert r.returncode == 0
    mid = float(r.stdout.strip().split("\n")[2].split(",")[1])
    assert abs(mid - 1.0 / math.pi) < 1e-12
    r = run("family", "scan", "--density", "cheb-u", "--t-min", "0.5",
            "--t-max", "1.5", "--steps", "3")
    assert r.returncode == 0
    for line in r.stdout.strip().split("\n")[1:]:
        assert abs(float(line.split(",")[1]) - 1.0) < 1e-6


def test_roots_bracket():
    r = run("--format", "json", "roots", "--density", "cheb-u", "--t", "3",
            "--search", "1.001", "5.0")
    assert r.returncode == 0
    obj = json.loads(r.stdout)
    assert obj["meta"]["n_roots"] == 1
    lo, hi = obj["rows"][0]
    assert 1.06 < lo < hi < 1.07


def test_solve_exit_zero():
    r = run("solve", "--density", "cheb-u", "--lam", "-0.5",
            "--g", "1/(1+x^2)", "--grid", "5")
    assert r.returncode == 0
    for line in r.stdout.strip().split("\n")[1:]:
        assert abs(float(line.split(",")[2])) < 1e-5


def test_custom_density_expression():
    r = run("moments", "--density-expr", "2*x", "--interval", "0", "1",
            "--n", "1")
    assert r.returncode == 0
    assert abs(float(r.stdout.strip().split("\n")[2].split(",")[1])
               - 2.0 / 3.0) < 1e-10


def test_usage_errors_exit_two():
    assert run("moments", "--density", "nope").returncode == 2
    assert run("moments").returncode == 2  # no density at all
    assert run("--tol", "banana", "verify").returncode == 2
    assert run("nonsense").returncode == 2
    assert run("solve", "--density", "cheb-u", "--lam", "-0.5",
               "--g", "1/(1+").returncode == 2
    assert run("family", "scan", "--density", "cheb-u", "--t-min", "2",
               "--t-max", "1", "--steps", "3").returncode == 2
    assert run("reducer", "--density-expr", "sin(x)", "--interval", "0",
               "1").returncode == 2  # mass far from 1


def test_numerical_failure_exit_three():
    r = run("--quad-levels", "3", "--tol", "1e-14", "family", "scan",
            "--density", "sqrt32", "--t-min", "1.2", "--t-max", "1.8",
            "--steps", "3")
    assert r.returncode == 3
    for line in r.stdout.strip().split("\n")[1:]:
        assert line.split(",")[1] == "nan"


def test_verify_quick_passes():
    r = run("verify", "--suite", "quick")
    assert r.returncode == 0
    assert "FAIL" not in r.stdout
    assert "pass" in r.stdout


def test_csv_determinism():
    a = run("family", "scan", "--density", "uniform", "--t-min", "0.2",
            "--t-max", "1.0", "--steps", "5")
    b = run("family", "scan", "--density", "uniform", "--t-min", "0.2",
            "--t-max", "1.0", "--steps", "5")
    assert a.stdout == b.stdout and a.returncode == 0


def test_plot_svg(tmp_path):
    csv_path = tmp_path / "scan.csv"
    scan = run("family", "scan", "--density", "uniform", "--t-min", "0.2",
               "--t-max", "1.0", "--steps", "9")
    csv_path.write_text(scan.stdout)
    out1 = tmp_path / "a.svg"
    out2 = tmp_path / "b.svg"
    for out in (out1, out2):
        r = run("plot", "--input", str(csv_path), "--x-col", "t",
                "--y-col", "f", "--output", str(out))
        assert r.returncode == 0
    svg = out1.read_text()
    assert svg == out2.read_text()  # byte-identical
    xml.dom.minidom.parseString(svg)  # well-formed
    assert 'viewBox="0 0 800 600"' in svg and "<polyline" in svg


def test_plot_two_points(tmp_path):
    csv_path = tmp_path / "two.csv"
    csv_path.write_text("x,y\n0,0\n1,1\n")
    out = tmp_path / "two.svg"
    r = run("plot", "--input", str(csv_path), "--x-col", "x", "--y-col", "y",
            "--output", str(out))
    assert r.returncode == 0
    assert out.read_text().count(",") >= 2


def test_plot_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert run("plot", "--input", str(empty), "--x-col", "x", "--y-col", "y",
               "--output", str(tmp_path / "o.svg")).returncode == 2
    good = tmp_path / "good.csv"
    good.write_text("x,y\n0,0\n1,1\n")
    assert run("plot", "--input", str(good), "--x-col", "x", "--y-col", "z",
               "--output", str(tmp_path / "o.svg")).returncode == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0,zero\n1,1\n")
    assert run("plot", "--input", str(bad), "--x-col", "x", "--y-col", "y",
               "--output", str(tmp_path / "o.svg")).returncode == 2
    assert run("plot", "--input", str(tmp_path / "missing.csv"), "--x-col",
               "x", "--y-col", "y",
               "--output", str(tmp_path / "o.svg")).returncode == 2
