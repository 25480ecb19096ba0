import json
import subprocess
import sys

import numpy as np
import pytest

from gswlab import _backend, adhm
from gswlab.cli import main, parse_config
from gswlab.errors import ConfigError


@pytest.fixture(autouse=True)
def restore_backend():
    before = _backend.name()
    yield
    _backend.use(before)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("suite", ["algebra", "dirac", "sw", "vafa-witten", "casd", "adhm", "fivedim"])
def test_verify_suites_pass(suite, capsys):
    code, out, err = run(["verify", "--suite", suite, "--quiet"], capsys)
    assert code == 0, out
    report = json.loads(out)
    assert report["passed"] and report["checks"]
    assert err == ""


def test_verify_cayley_reports_failing_check(capsys):
    code, out, err = run(["verify", "--suite", "cayley"], capsys)
    report = json.loads(out)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    assert code == 1 and failed == ["eigenvalues_3_and_minus1"]
    assert "FAIL" in err and "PASS" in err


def test_verify_unknown_suite(capsys):
    code, _, err = run(["verify", "--suite", "bogus"], capsys)
    assert code == 2 and "unknown suite 'bogus'" in err


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 2
    assert run(["verify", "--seed", "x"], capsys)[0] == 2
    assert run(["--backend", "fortran", "verify"], capsys)[0] == 2


def test_verify_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(["verify", "--suite", "all", "--seed", "3", "--out", str(p), "--quiet"], capsys)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert "timings" not in json.loads(paths[0].read_text())


def test_verify_timings(capsys):
    _, out, _ = run(["verify", "--suite", "algebra", "--timings", "--quiet"], capsys)
    assert "algebra" in json.loads(out)["timings"]


def test_verify_python_backend(capsys):
    code, out, _ = run(["--backend", "python", "verify", "--suite", "dirac", "--quiet"], capsys)
    assert code == 0 and json.loads(out)["config"]["backend"] == "python"


def test_flow_sw_descent(tmp_path, capsys):
    csv_path, rep = tmp_path / "t.csv", tmp_path / "r.json"
    code, _, _ = run(["flow", "--kind", "sw-descent", "--steps", "30", "--out", str(csv_path), "--report", str(rep)], capsys)
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "step,dirac_res,curv_res" and len(lines) == 32
    data = np.loadtxt(csv_path, delimiter=",", skiprows=1)
    total = np.hypot(data[:, 1], data[:, 2])
    assert np.all(np.diff(total) <= 0)
    report = json.loads(rep.read_text())
    assert report["passed"] and report["config"]["rate"] == pytest.approx((2 * np.pi / 8) ** 2 / 8)
    assert "-0.0" not in csv_path.read_text()


def test_flow_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a", "b"):
        p = tmp_path / f"{name}.csv"
        run(["flow", "--kind", "fivedim", "--seed", "5", "--steps", "5", "--out", str(p), "--report", str(tmp_path / "r.json")],
            capsys)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_flow_fivedim_fixed_point(tmp_path, capsys):
    cfg = tmp_path / "fp.cfg"
    cfg.write_text("# constant diagonal start\ninit = fixed-point\nsteps = 10\n")
    code, out, _ = run(["flow", "--kind", "fivedim", "--config", str(cfg)], capsys)
    assert code == 0
    data = np.loadtxt(out.splitlines()[1:], delimiter=",")
    assert data.shape == (11, 6)
    assert np.all(data[:, 1:4] == data[0, 1:4])
    assert np.abs(data[:, 4:]).max() <= 1e-12


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("steps = 3\nnonsense\n", 2, "expected 'key = value'"),
        ("steps = 3\n\nwidth = 2\n", 3, "unknown key 'width'"),
        ("steps = 3\nsteps = 4\n", 2, "duplicate key"),
        ("# c\nN = eight\n", 2, "N needs a int"),
        ("scheme = upwind\n", 1, "scheme must be one of"),
    ],
)
def test_config_diagnostics(tmp_path, capsys, text, line, fragment):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    code, _, err = run(["flow", "--kind", "sw-descent", "--config", str(cfg)], capsys)
    assert code == 2
    assert f"bad.cfg:{line}:" in err and fragment in err


def test_config_semantic_errors(capsys):
    assert run(["flow", "--kind", "sw-descent", "--N", "2"], capsys)[0] == 2
    assert run(["flow", "--kind", "fivedim", "--dt", "-1"], capsys)[0] == 2
    assert run(["flow", "--kind", "sw-descent", "--config", "/nonexistent.cfg"], capsys)[0] == 2


def test_parse_config_types():
    cfg = parse_config("N = 6  # grid\nL = 3.5\nscheme=forward\n", "sw-descent")
    assert cfg == {"N": 6, "L": 3.5, "scheme": "forward"}
    with pytest.raises(ConfigError):
        parse_config("dt = 0.1\n", "sw-descent")


def test_flow_divergence_exit(capsys):
    code, _, err = run(["flow", "--kind", "sw-descent", "--rate", "5.0", "--steps", "200"], capsys)
    assert code == 1 and err


def _adhm_report(path, capsys, *extra):
    code, out, _ = run(["adhm", str(path), *extra], capsys)
    assert code == 0
    return json.loads(out)["results"]


def test_adhm_command(tmp_path, capsys, rng):
    zero = tmp_path / "zero.csv"
    adhm.save_adhm(zero, adhm.ADHMData.zeros(2, 2))
    res = _adhm_report(zero, capsys)
    assert res["level_member"] and res["on_slice"] and not res["tgr_slice"]

    sl = tmp_path / "slice.json"
    adhm.save_adhm(sl, adhm.slice_example(zeta=2.0))
    res = _adhm_report(sl, capsys, "--level", "i", "--zeta", "2.0")
    assert res["level_member"] and res["tgr_slice"] and res["level_defect"] <= 1e-15

    rnd = tmp_path / "rand.csv"
    d = adhm.ADHMData.random(rng, 2, 3)
    adhm.save_adhm(rnd, d)
    res = _adhm_report(rnd, capsys)
    muR = np.array(res["mu_R"])
    assert not res["level_member"] and not res["on_slice"]
    assert np.allclose(muR[..., 0] + 1j * muR[..., 1], adhm.adhm_moment(d)[0])


def test_adhm_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("r,n\n1,1\nblock,row,col,re,im\nB9,0,0,1,0\n")
    code, _, err = run(["adhm", str(bad)], capsys)
    assert code == 2 and "bad.csv:4:" in err


@pytest.mark.parametrize("what, shape", [("eigenmap", (29, 29)), ("p-plus", (29, 29)), ("form", (15, 5))])
def test_cayley_dump(tmp_path, capsys, what, shape):
    out = tmp_path / "m.csv"
    code, _, err = run(["cayley", "dump", "--what", what, "--out", str(out)], capsys)
    assert code == 0 and "eigenvalues -3 x7, 1 x21" in err
    rows = [line.split(",") for line in out.read_text().splitlines()]
    assert (len(rows), len(rows[0])) == shape
    if what == "p-plus":
        P = np.array([[float(x) for x in r[1:]] for r in rows[1:]])
        assert round(np.trace(P)) == 7


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gswlab", "verify", "--suite", "algebra", "--quiet"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and json.loads(proc.stdout)["passed"]
