import json
import subprocess
import sys

import pytest

from pentachain.cli import main
from pentachain.coords import random_coordinates
from pentachain.invariants import pentagon_clusters
from pentachain.io import dump_triangulation
from pentachain.triangulation import Triangulation, pachner_14

TETRA = Triangulation.from_tuples([(1, 2, 3, 4)])
DEG4 = Triangulation.from_tuples([(1, 2, 5, 6), (2, 3, 5, 6), (3, 4, 5, 6), (4, 1, 5, 6)])


def write(tmp_path, name, t, n=1, seed=0, coords=True):
    z = random_coordinates(t.vertices, n, seed) if coords else None
    p = tmp_path / name
    p.write_text(json.dumps(dump_triangulation(t, z, n)))
    return str(p)


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_verify_pentagon_scalar(capsys):
    code, out = run(["verify-pentagon", "--scalar", "--trials", "100", "--seed", "1"], capsys)
    assert code == 0
    (rep,) = out["reports"]
    assert rep["equal"] and len(rep["results"]) == 100


def test_verify_pentagon_matrix(capsys):
    code, out = run(["verify-pentagon", "--matrix", "--n", "2", "--trials", "2", "--seed", "7"], capsys)
    assert code == 0 and out["reports"][0]["n"] == 2


def test_verify_pentagon_jobs_deterministic(capsys, monkeypatch):
    argv = ["verify-pentagon", "--scalar", "--matrix", "--trials", "4", "--seed", "3"]
    _, serial = run(argv, capsys)
    monkeypatch.setenv("PENTACHAIN_JOBS", "2")
    _, parallel = run(argv, capsys)
    assert serial == parallel
    assert "elapsed_ms" not in serial


def test_timing_flag(capsys):
    _, out = run(["verify-pentagon", "--trials", "1", "--timing"], capsys)
    assert isinstance(out["elapsed_ms"], int)


@pytest.mark.parametrize("argv", [
    ["verify-pentagon", "--n", "0"],
    ["verify-pentagon", "--trials", "-3"],
    ["nonsense"],
])
def test_usage_errors(argv, capsys):
    code, _ = run(argv, capsys)
    assert code == 64


def test_bad_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("PENTACHAIN_JOBS", "many")
    code, _ = run(["verify-pentagon"], capsys)
    assert code == 64


def test_invariant_all_colorings(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    code, out = run(["invariant", f, "--all-colorings"], capsys)
    assert code == 0 and out["colorings"] == 6 and len(out["rows"]) == 6


def test_invariant_same_after_14(tmp_path, capsys):
    z = random_coordinates(range(1, 6), 1, 4)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(dump_triangulation(TETRA, random_coordinates(range(1, 5), 1, 4))))
    b.write_text(json.dumps(dump_triangulation(pachner_14(TETRA, 1, 5), z)))
    _, ra = run(["invariant", str(a), "--all-colorings"], capsys)
    _, rb = run(["invariant", str(b), "--all-colorings"], capsys)
    assert [r["value"] for r in ra["rows"]] == [r["value"] for r in rb["rows"]]


def test_invariant_single_coloring_and_output_file(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    out = tmp_path / "out.json"
    code, printed = run(["invariant", f, "--coloring", "123:0,124:0", "-o", str(out)], capsys)
    assert code == 0 and printed is None
    assert json.loads(out.read_text())["colorings"] == 1


def test_invariant_generates_missing_coordinates(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA, n=2, coords=False)
    _, one = run(["invariant", f, "--coloring", "123:0,123:1,124:0,124:1", "--seed", "5"], capsys)
    _, two = run(["invariant", f, "--coloring", "123:0,123:1,124:0,124:1", "--seed", "5"], capsys)
    assert one == two and one["n"] == 2


def test_bad_coloring_is_usage_error(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    code, _ = run(["invariant", f, "--coloring", "123:0"], capsys)
    assert code == 64


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{")
    code, _ = run(["invariant", str(p)], capsys)
    assert code == 65


def test_missing_file(tmp_path, capsys):
    code, _ = run(["invariant", str(tmp_path / "nope.json")], capsys)
    assert code == 65


def test_two_boundary_components(tmp_path, capsys):
    t = Triangulation.from_tuples([(1, 2, 3, 4), (5, 6, 7, 8)])
    f = write(tmp_path, "two.json", t)
    code, _ = run(["invariant", f], capsys)
    assert code == 3


def test_nonmanifold_is_data_error(tmp_path, capsys):
    t = Triangulation.from_tuples([(1, 2, 3, 4), (1, 3, 2, 5), (1, 3, 2, 6)])
    f = write(tmp_path, "nm.json", t)
    code, _ = run(["invariant", f], capsys)
    assert code == 65


def test_build_complex(tmp_path, capsys):
    f = write(tmp_path, "ball.json", pachner_14(TETRA, 1, 5), n=2)
    code, out = run(["build-complex", f], capsys)
    assert code == 0
    assert out["report"]["ok"]
    assert out["complex"]["dims"] == [2, 16, 16, 2]


def test_pachner_23(tmp_path, capsys):
    lhs, _ = pentagon_clusters()
    f = write(tmp_path, "lhs.json", lhs)
    code, out = run(["pachner", f, "--move", "2-3", "--tetras", "T1,T2"], capsys)
    assert code == 0
    assert sorted(tuple(x["vertices"]) for x in out["triangulation"]["tetrahedra"]) == [
        (1, 2, 4, 5), (1, 3, 4, 5), (2, 3, 4, 5)]


def test_pachner_14_check_invariants(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    out_file = tmp_path / "ball.json"
    code, out = run(["pachner", f, "--move", "1-4", "--tetra", "T1", "--new-vertex", "5",
                     "--coordinate", "11", "--check-invariants", "-o", str(out_file)], capsys)
    assert code == 0 and out["all_match"]
    assert len(json.loads(out_file.read_text())["tetrahedra"]) == 4


def test_pachner_explicit_coordinate(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    code, out = run(["pachner", f, "--move", "1-4", "--tetra", "1", "--coordinate", '"7/3"'], capsys)
    assert code == 0
    v5 = next(v for v in out["triangulation"]["vertices"] if v["id"] == 5)
    assert v5["coordinate"] == [["7/3"]] and v5["inner"]


def test_pachner_32_degree_four(tmp_path, capsys):
    f = write(tmp_path, "deg4.json", DEG4)
    code, _ = run(["pachner", f, "--move", "3-2", "--edge", "5,6"], capsys)
    assert code == 4


def test_pachner_02_and_41(tmp_path, capsys):
    lhs, _ = pentagon_clusters()
    f = write(tmp_path, "lhs.json", lhs)
    code, out = run(["pachner", f, "--move", "0-2", "--face", "123", "--check-invariants"], capsys)
    assert code == 0 and out["all_match"]
    assert out["after"]["N"][3] == 4
    ball = write(tmp_path, "ball.json", pachner_14(TETRA, 1, 5))
    code, out = run(["pachner", ball, "--move", "4-1", "--vertex", "5"], capsys)
    assert code == 0 and out["after"]["N"][3] == 1


def test_pachner_missing_argument(tmp_path, capsys):
    f = write(tmp_path, "t.json", TETRA)
    code, _ = run(["pachner", f, "--move", "2-3"], capsys)
    assert code == 64


def test_selftest(capsys):
    code, out = run(["selftest"], capsys)
    assert code == 0 and out["passed"] == out["total"] == 15
    code, out = run(["selftest", "--only", "complex", "--seed", "9"], capsys)
    assert code == 0 and {c["group"] for c in out["checks"]} == {"complex"}
    code, _ = run(["selftest", "--only", "nothing"], capsys)
    assert code == 64


def test_gen_coords(capsys):
    code, a = run(["gen-coords", "--preset", "ball", "--n", "2", "--seed", "3"], capsys)
    _, b = run(["gen-coords", "--preset", "ball", "--n", "2", "--seed", "3"], capsys)
    assert code == 0 and a == b
    assert all(len(v["coordinate"]) == 2 for v in a["vertices"])
    code, _ = run(["gen-coords"], capsys)
    assert code == 64


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pentachain", "verify-pentagon", "--n", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 64
    proc = subprocess.run([sys.executable, "-m", "pentachain", "verify-pentagon", "--trials", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["reports"][0]["equal"]


def test_byte_identical_output():
    argv = [sys.executable, "-m", "pentachain", "selftest", "--seed", "4"]
    a, b = (subprocess.run(argv, capture_output=True).stdout for _ in range(2))
    assert a == b and a
