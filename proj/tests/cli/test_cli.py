import json
import os
import shutil
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("CUBEKIT_CLI", "cubekit")
DATA = Path(__file__).resolve().parents[2] / "data"
QUAD = ["--quadruple", "H4:B,H7:B,H12:B,H15:B", "--g", "aa", "--h", "bb"]


def run(*args, cwd=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=cwd)


@pytest.fixture(scope="module")
def f2(tmp_path_factory):
    d = tmp_path_factory.mktemp("f2")
    assert run("generate", "f2-ball", "-o", d, "--radius", 10).returncode == 0
    return d / "f2-ball.graph", d / "f2-ball.action"


def test_validate_and_exit_codes(tmp_path):
    r = run("validate", DATA / "q3.graph")
    assert r.returncode == 0
    assert r.stdout == "median: OK (8 vertices, 3 hyperplanes)\n"
    tri = tmp_path / "tri.graph"
    tri.write_text("e a b\ne b c\ne c a\n")
    assert run("validate", tri).returncode == 1
    loop = tmp_path / "loop.graph"
    loop.write_text("e a b\ne b b\n")
    r = run("validate", loop)
    assert r.returncode == 2 and "line 2" in r.stderr
    assert run("validate").returncode == 2
    assert run("no-such-command").returncode == 2


def test_separation_and_facing():
    r = run("separation", DATA / "star.graph", "H0", "H2")
    assert r.returncode == 0 and "strongly separated: yes" in r.stdout
    assert run("separation", DATA / "q3.graph", "H0", "H1").returncode == 1
    assert run("facing", DATA / "star.graph", "--k=3").stdout.startswith("H0:B H1:B H2:B\n")
    assert run("facing", DATA / "q3.graph", "--k=2").returncode == 1


def test_json_and_threads_flags():
    a = run("--format", "json", "decompose", DATA / "grid.graph")
    b = run("decompose", DATA / "grid.graph", "--format=json", "--threads", 3)
    assert a.stdout == b.stdout
    j = json.loads(a.stdout)
    assert j["rank"] == 2 and j["exit_code"] == 0
    env = dict(os.environ, CUBEKIT_THREADS="2")
    c = subprocess.run([CLI, "report", DATA / "f2xz.graph", DATA / "f2xz.action"], capture_output=True, text=True,
                       env=env)
    d = run("report", DATA / "f2xz.graph", DATA / "f2xz.action", "--threads", 1)
    assert c.stdout == d.stdout
    assert "r=2 k=1 m=1" in c.stdout


def test_budget_is_not_a_refutation():
    g, a = DATA / "z2-grid.graph", DATA / "z2-grid.action"
    assert run("flip", g, a, "H0:B", "-L", 2).returncode == 3
    f, fa = DATA / "f2-ball.graph", DATA / "f2-ball.action"
    r = run("quadruple", f, fa, "H0:B", "-L", 6)
    assert r.returncode == 3 and r.stderr.startswith("inconclusive:")
    assert run("flip", f, fa, "H0:B", "-L", 4).stdout == "flip: abA\n"


def test_certificates_round_trip(f2, tmp_path):
    g, a = f2
    emitted = []
    for name, args in [
        ("pp.cert", ["pingpong", g, a, *QUAD]),
        ("built.cert", ["pingpong", g, a, "--from", "H0:B"]),
        ("stable.cert", ["stable", g, a, "H0", *QUAD]),
    ]:
        out = tmp_path / name
        r = run(*args, "-o", out)
        assert r.returncode == 0, r.stderr
        emitted.append(out)
    emitted += sorted(DATA.glob("*.cert"))
    for cert in emitted:
        r = run("verify", cert)
        assert r.returncode == 0, (cert, r.stdout, r.stderr)

    moved = tmp_path / "elsewhere"
    moved.mkdir()
    shutil.copy(tmp_path / "pp.cert", moved)
    assert run("verify", moved / "pp.cert", "--graph", g, "--action", a).returncode == 0

    text = (tmp_path / "stable.cert").read_text()
    bad = tmp_path / "bad.cert"
    bad.write_text(text.replace("distance 8", "distance 7", 1))
    r = run("verify", bad, "--graph", g, "--action", a)
    assert r.returncode == 1 and "line " in r.stdout


def test_spectral_evidence(f2):
    g, a = f2
    r = run("spectral", g, a, "H0:B", "-R", 9, "--g", "aa", "--h", "bb")
    assert r.returncode == 0
    lines = r.stdout.splitlines()
    assert lines[0] == "radius,estimate,residual"
    assert lines[-1].startswith("# stable: evidence level 2")
