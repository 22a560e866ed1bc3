import io
import json

import pytest

from surfacelie.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call("--json", *argv)
    return code, json.loads(out) if out else None, err


def test_grdim():
    code, data, err = call_json("grdim", "--g", "3", "--n", "2")
    assert code == 0 and data["payload"]["rank"] == 14 and data["payload"]["torsion_free"]
    assert "elapsed_ms" in err


def test_grdim_text():
    code, out, _ = call("grdim", "--g", "2", "--n", "3")
    assert code == 0 and "rank: 16" in out.splitlines()


@pytest.mark.parametrize("argv", [
    ("grdim", "--g", "0", "--n", "2"),
    ("grdim", "--g", "3"),
    ("invariants", "--g", "2", "--module", "H", "--p", "4"),
    ("--max-degree", "0", "grdim", "--g", "1", "--n", "1"),
    ("nonsense",),
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == ""


def test_check_ci():
    code, data, _ = call_json("check", "ci", "--g", "4")
    assert code == 0 and data["status"] == "pass" and data["payload"]["factor"] == 3


def test_check_decomp_needs_genus_two():
    code, _, err = call("check", "decomp", "--g", "1")
    assert code == 2 and "g >= 2" in err


def test_tau_identity(tmp_path):
    f = tmp_path / "id.txt"
    f.write_text("genus 3\n")
    code, data, _ = call_json("tau", "--file", str(f))
    assert code == 0 and data["payload"]["tau"] == [0] * 20


def test_tau_not_in_image(tmp_path):
    f = tmp_path / "phi.txt"
    f.write_text("genus 3\na1 -> a1 [a2, b2]\n")
    code, data, _ = call_json("tau", "--file", str(f), "--relaxed", "2")
    assert code == 1 and data["payload"]["error"] == "NotInImage"
    code, data, _ = call_json("tau", "--file", str(f))
    assert code == 1 and data["payload"]["condition"] == "relator"


def test_tau_parse_error(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("genus 3\na1 -> a9\n")
    code, _, err = call("tau", "--file", str(f))
    assert code == 2 and "error" in err
    code, _, _ = call("tau", "--file", str(tmp_path / "missing.txt"))
    assert code == 2


def test_snf(tmp_path):
    f = tmp_path / "m.txt"
    f.write_text("2 2\n2 0\n0 3\n")
    code, data, _ = call_json("snf", "--file", str(f), "--transforms")
    assert code == 0 and data["payload"]["diag"] == [1, 6] and len(data["payload"]["left"]) == 2


def test_h1_files(tmp_path):
    g, m = tmp_path / "g.txt", tmp_path / "m.txt"
    g.write_text("cyclic 2\n")
    m.write_text("modulus 8\nrank 2\n1 0\n0 1\n-1 0\n0 -1\n")
    code, data, _ = call_json("h1", "--group", str(g), "--module", str(m))
    assert code == 0 and data["payload"]["divisors"] == [2, 2] and data["payload"]["exponent"] == 2


def test_h1_mismatched_module(tmp_path):
    g, m = tmp_path / "g.txt", tmp_path / "m.txt"
    g.write_text("cyclic 3\n")
    m.write_text("modulus 8\nrank 1\n1\n-1\n")
    assert call("h1", "--group", str(g), "--module", str(m))[0] == 2


@pytest.mark.parametrize("module", ["H", "L", "LmodH"])
def test_invariants_vanish_mod_2(module):
    code, data, _ = call_json("invariants", "--g", "2", "--module", module)
    assert code == 0 and data["payload"]["dimension"] == 0


def test_corpus_verify():
    code, data, _ = call_json("corpus", "verify")
    assert code == 0 and data["payload"]["span_rank"] == 20 and data["payload"]["mismatches"] == []


def test_corpus_regenerate_refuses(tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("id: one\nmode: strict\ngenus 3\n")
    code, data, _ = call_json("corpus", "regenerate", "--path", str(f))
    assert code == 0 and data["payload"]["diffs"] == 1 and not data["payload"]["written"]
    assert call("corpus", "regenerate", "--path", str(f), "--write")[0] == 2
    assert call("corpus", "regenerate", "--path", str(f), "--write", "--overwrite")[0] == 0
    assert "expected_tau: 0 0" in f.read_text()


def test_json_output_is_deterministic():
    a = call("--json", "check", "jacobi", "--g", "3")[1]
    b = call("--json", "check", "jacobi", "--g", "3")[1]
    assert a == b and json.loads(a)["status"] == "pass"
