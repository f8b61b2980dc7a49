import io
import json

import pytest

from kripkejoyal.cli import BAD_INPUT, CAP, FAIL, OK, run


def _run(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def _write(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def test_validate_cube2():
    code, out = _run("validate", "--site", "cube-2")
    assert code == OK
    assert "FAIL" not in out


def test_force_kripke_countermodel():
    code, out = _run("force", "--bundle", "kripke-em")
    assert code == OK
    assert "1 ⊮ σ∨¬σ" in out.splitlines()
    assert "0 ⊩ σ∨¬σ" in out.splitlines()
    assert "1 ⊩ ¬¬σ" in out.splitlines()


def test_tfib_count():
    code, out = _run("tfib", "--count", "--bundle", "terminal-fibers")
    assert (code, out.strip()) == (OK, "A: 6 trivial fibration structures")


def test_fib_count_hits_cap():
    code, _ = _run("fib", "--count", "--bundle", "terminal-fibers")
    assert code == CAP


def test_small_cap_from_flag():
    code, _ = _run("tfib", "--count", "--max-count", "3", "--bundle", "terminal-fibers")
    assert code == CAP


def test_certificate_round_trip(tmp_path):
    cert = tmp_path / "cert.json"
    code, _ = _run("tfib", "--bundle", "terminal-fibers", "--json", str(cert))
    assert code == OK
    code, out = _run("tfib", "--bundle", "terminal-fibers", "--verify", str(cert))
    assert code == OK, out
    data = json.loads(cert.read_text(encoding="utf-8"))
    # make a filler disagree with its partial element
    for row in data["fillers"]:
        if row[2][0]:
            given = row[2][1][0][1]
            row[3] = "1" if given != "1" else "0"
            break
    _write(cert, data)
    code, out = _run("tfib", "--bundle", "terminal-fibers", "--verify", str(cert))
    assert code == FAIL
    assert "FAIL" in out


def test_fib_certificate_round_trip(tmp_path):
    bundle = _write(tmp_path / "b.json", {
        "site": "terminal",
        "presheaves": {"X": {"fibers": {"*": ["p", "q"]}}},
        "families": {"A": {"base": "X", "fibers": {"*": {"p": [0], "q": [1]}}}},
    })
    cert = tmp_path / "cert.json"
    assert _run("fib", "--bundle", bundle, "--json", str(cert))[0] == OK
    assert _run("fib", "--bundle", bundle, "--verify", str(cert))[0] == OK


def test_missing_structure_is_a_semantic_failure(tmp_path):
    bundle = _write(tmp_path / "b.json", {
        "site": "terminal",
        "presheaves": {"X": {"fibers": {"*": ["p", "q"]}}},
        "families": {"A": {"base": "X", "fibers": {"*": {"p": [], "q": [0]}}}},
    })
    assert _run("tfib", "--bundle", bundle)[0] == FAIL
    assert _run("fib", "--bundle", bundle)[0] == FAIL


@pytest.mark.parametrize("argv", [
    ["validate", "--site", "no-such-site"],
    ["frobnicate"],
    ["tfib", "--bundle", "terminal-fibers", "--verify", "/nonexistent/cert.json"],
])
def test_bad_input(argv):
    assert _run(*argv)[0] == BAD_INPUT


def test_malformed_json_is_bad_input(tmp_path):
    p = tmp_path / "b.json"
    p.write_text("{not json", encoding="utf-8")
    assert _run("validate", "--bundle", str(p))[0] == BAD_INPUT


def test_non_functorial_presheaf(tmp_path):
    bundle = _write(tmp_path / "b.json", {
        "site": "arrow",
        "presheaves": {"X": {"fibers": {"a": ["x0", "x1"], "b": ["y"]},
                             "restrictions": {"id_a": {"x0": "x1", "x1": "x0"},
                                              "f": {"y": "x0"}}}},
    })
    code, out = _run("validate", "--bundle", bundle)
    assert code == FAIL and "FAIL presheaf X" in out
    # every other command refuses to run on it
    assert _run("sections", "--bundle", bundle)[0] == BAD_INPUT


def test_json_output(tmp_path):
    out = tmp_path / "r.json"
    code, _ = _run("force", "--bundle", "kripke-em", "--json", str(out))
    assert code == OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert all(c["ok"] for c in data["checks"])


def test_id_rules_small_site(tmp_path):
    bundle = _write(tmp_path / "b.json", {
        "site": "poset-2",
        "presheaves": {"K": {"fibers": {"0": [0, 1], "1": [0, 1]}, "discrete": True}},
        "families": {"K": {"base": "1", "constant": "K"}},
    })
    code, out = _run("id-rules", "--bundle", bundle)
    assert code == OK, out
    assert "computation rule strict" in out


@pytest.mark.parametrize("bundle", ["kripke-em", "terminal-fibers", "arrow-family"])
def test_report_is_deterministic(bundle):
    first, second = _run("report", "--bundle", bundle), _run("report", "--bundle", bundle)
    assert first == second
    assert first[0] == OK


def test_cofibration_table_with_non_sieve(tmp_path):
    site_path = _write(tmp_path / "s.json", {
        "name": "arrow", "objects": ["a", "b"],
        "morphisms": [{"id": "f", "dom": "a", "cod": "b"}],
        "cofibrations": {"a": [[], ["id_a"]], "b": [[], ["id_b"]]},
    })
    assert _run("validate", "--site", site_path)[0] == BAD_INPUT
