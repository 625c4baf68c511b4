import io as stdio
import json
import subprocess
import sys

import pytest

from defect_statesum.cli import GENERATOR, data_path, main


def run(*argv):
    out = stdio.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_check_shipped_file():
    code, text = run("check", data_path("example1_z2.json"))
    assert code == 0
    assert "35/35 equations hold" in text
    assert "rho = 2" in text and "lambda = 2" in text


def test_check_perturbed_file_names_equations():
    code, text = run("check", data_path("example1_z2_perturbed.json"))
    assert code == 1
    violated = text.strip().splitlines()[-1]
    assert violated.startswith("violated: 8, ")
    assert "FAIL  at (" in text


def test_check_malformed(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"algebra": {}}', encoding="utf-8")
    assert run("check", bad)[0] == 2
    assert run("check", tmp_path / "missing.json")[0] == 2


def test_invariant_trivial_system():
    code, text = run("invariant", data_path("example3_1_1.json"), data_path("plain_sphere.json"))
    assert code == 0
    assert "normalized = 1\n" in text


def test_invariant_closed_torus():
    code, text = run("invariant", data_path("example4_z2.json"), "plain_torus", "--method", "brute")
    assert code == 0 and "normalized = 2\n" in text
    assert "|T0^0| = 7" in text and "a=7 abar=7" in text


def test_brute_and_contract_value_lines_identical():
    lines = {}
    for method in ("brute", "contract"):
        code, text = run("invariant", data_path("example1_z2.json"), "octahedron_equator", "--method", method)
        assert code == 0
        lines[method] = [ln for ln in text.splitlines() if "normalized" in ln]
    assert lines["brute"] == lines["contract"]


def test_invariant_json():
    code, text = run("invariant", data_path("example1_z2.json"), "sphere_equator", "--json")
    doc = json.loads(text)
    assert code == 0 and doc["normalized"] == "1/2" and doc["n_on_vertices"] == 6


def test_too_large_exit_code():
    code, text = run("invariant", data_path("example1_s3.json"), "torus_meridian", "--method", "brute")
    assert code == 3 and "--method contract" in text


def test_invariant_rejects_invalid_system():
    code, _ = run("invariant", data_path("example1_z2_perturbed.json"), "plain_sphere")
    assert code == 1


def test_invalid_complex_file(tmp_path):
    doc = json.loads(data_path("plain_sphere.json").read_text(encoding="utf-8"))
    doc["triangles"][0].reverse()
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert run("invariant", data_path("example4_z2.json"), path)[0] == 2


def test_fuzz_sphere_equator_seed_7():
    code, text = run("fuzz", data_path("example1_z2.json"), data_path("sphere_equator.json"), "--seed", 7, "--steps", 200)
    assert code == 0
    assert f"generator: {GENERATOR}" in text and "seed: 7" in text
    assert "MISMATCH" not in text and "invariant constant over 200 moves" in text
    assert "moves: flip22=" in text


def test_fuzz_zero_steps():
    code, text = run("fuzz", data_path("example1_z2.json"), "sphere_equator", "--steps", 0)
    assert code == 0 and "step" not in text.split("initial normalized")[1].split("moves:")[0]


def test_fuzz_wrong_convention_fails_with_trace():
    code, text = run(
        "fuzz", data_path("example1_s3.json"), "sphere_equator", "--seed", 1, "--barred-order", "encounter"
    )
    assert code == 1
    assert "mismatch at step" in text
    assert '"kind": ' in text


def test_fuzz_bad_parameters():
    assert run("fuzz", data_path("example1_z2.json"), "sphere_equator", "--checkpoint-every", 0)[0] == 2
    assert run("fuzz", data_path("example1_z2.json"), "sphere_equator", "--steps", "x")[0] == 2


def test_gen_matrix_passes_check(tmp_path):
    out = tmp_path / "m.json"
    assert run("gen", "matrix", "--n", 2, "--m", 2, "-o", out)[0] == 0
    code, text = run("check", out)
    assert code == 0 and "rho = 2" in text and "lambda = 2" in text


def test_gen_group_algebra_from_table(tmp_path):
    out = tmp_path / "g.json"
    assert run("gen", "group-algebra", "--table", data_path("z2.tbl"), "-o", out)[0] == 0
    code, text = run("check", out)
    assert code == 0 and "rho = 2" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["example1", "--group", "z3"],
        ["example1-s3"],
        ["trivial-defect", "--group", "s3"],
        ["trivial-defect", "--matrix", "2"],
        ["twisted", "--group", "z2"],
    ],
)
def test_gen_other_systems(argv, tmp_path):
    out = tmp_path / "s.json"
    assert run("gen", *argv, "-o", out)[0] == 0
    assert run("check", out)[0] == 0


def test_gen_twisted_with_cocycles(tmp_path):
    sign = [[1, 1], [1, -1]]
    cocycles = tmp_path / "c.json"
    cocycles.write_text(json.dumps({"alpha": sign, "beta": sign, "gamma": sign}), encoding="utf-8")
    out = tmp_path / "s.json"
    assert run("gen", "twisted", "--group", "z2", "--cocycles", cocycles, "-o", out)[0] == 0
    assert run("check", out)[0] == 0
    cocycles.write_text(json.dumps({"alpha": [[1, 0], [1, 1]]}), encoding="utf-8")
    assert run("gen", "twisted", "--group", "z2", "--cocycles", cocycles)[0] == 2


def test_gen_bad_parameters():
    assert run("gen", "matrix", "--n", 0, "--m", 2)[0] == 2
    assert run("gen", "group-algebra")[0] == 2
    assert run("gen", "bogus")[0] == 2


def test_gen_complex_and_subdivide(tmp_path):
    cx = tmp_path / "c.json"
    sub = tmp_path / "s.json"
    assert run("gen", "complex", "plain_sphere", "-o", cx)[0] == 0
    assert run("subdivide", cx, "-o", sub)[0] == 0
    code, text = run("invariant", data_path("example4_z2.json"), sub)
    assert code == 0 and "normalized = 1/2\n" in text and "|T0^0| = 14" in text


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "defect_statesum", "check", str(data_path("example3_1_1.json"))],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "35/35 equations hold" in proc.stdout
