from __future__ import annotations

import io
import json

import pytest

from hollowspec.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {
        "three": "2\n0 3\n3 0\n",
        "root5": "3\n0 2 1\n2 0 0\n1 0 0\n",
        "blown": "3\n0 2 -1\n2 0 -1\n-1 -1 0\n",
        "asym": "2\n0 1\n2 0\n",
        "big": "2\n0 4\n4 0\n",
    }
    out = {}
    for name, text in paths.items():
        p = tmp_path / f"{name}.hsm"
        p.write_text(text)
        out[name] = str(p)
    star = tmp_path / "k15.sg"
    star.write_text("6 5\n" + "".join(f"1 {v} +\n" for v in range(2, 7)))
    out["k15"] = str(star)
    tree = tmp_path / "t134.sg"
    tree.write_text("9 8\n1 2 +\n1 3 +\n1 6 +\n3 4 +\n4 5 +\n6 7 +\n7 8 +\n8 9 +\n")
    out["tree"] = str(tree)
    out["dir"] = tmp_path
    return out


def test_check_outside(files):
    code, out, _ = call("check", "--lambda", "2", files["three"])
    assert code == 0
    assert out.splitlines()[0] == "Outside"


def test_check_records(files):
    code, out, _ = call("check", "--lambda", "sqrt:5", "--format", "records", files["root5"])
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "OnBoundary" and rec["witness"] is None


def test_decompose_not_blowup(files):
    code, out, _ = call("decompose", files["root5"])
    assert code == 1 and out.startswith("NotBlowup")


def test_decompose_entry_too_large(files):
    code, out, _ = call("decompose", files["big"])
    assert code == 1 and out.startswith("EntryTooLarge")


def test_decompose_success(files):
    code, out, _ = call("decompose", files["blown"])
    assert code == 0
    assert "multiplicities: 1:2 2:1" in out and "switching: +++" in out


def test_parse_errors_exit_two(files):
    code, _, err = call("check", "--lambda", "2", files["asym"])
    assert code == 2 and "asym.hsm:3:" in err
    code, _, err = call("check", "--lambda", "nonsense", files["three"])
    assert code == 2 and "threshold" in err
    code, _, _ = call("check", files["three"])
    assert code == 2
    code, _, _ = call("frontier", "--lambda", "2", "--cap", "0", files["tree"])
    assert code == 2
    code, _, _ = call("search-graphs", "--lambda", "2", "--max-order", "11")
    assert code == 2


def test_certify_and_recheck_records(files):
    code, out, _ = call("certify", "--lambda", "2", "--format", "records", files["k15"])
    assert code == 0 and json.loads(out)["verdict"] == "MinimalForbidden"
    rec = files["dir"] / "c.jsonl"
    rec.write_text(out)
    code, out, _ = call("certify", "--recheck", str(rec))
    assert code == 0 and "1/1 certificates re-verified" in out


def test_recheck_catches_tampering(files):
    _, out, _ = call("certify", "--lambda", "2", "--format", "records", files["k15"])
    data = json.loads(out)
    data["evidence"][0][1] = "Outside"
    rec = files["dir"] / "bad.jsonl"
    rec.write_text(json.dumps(data) + "\n")
    code, out, _ = call("certify", "--recheck", str(rec))
    assert code == 1 and "FAILED" in out


def test_search_graphs_is_deterministic_and_rechecks(files):
    _, one, _ = call("search-graphs", "--lambda", "2", "--max-order", "6", "--format", "records")
    _, three, _ = call("search-graphs", "--lambda", "2", "--max-order", "6", "--format", "records", "--workers", "3")
    assert one == three and len(one.splitlines()) == 17
    rec = files["dir"] / "s.jsonl"
    rec.write_text(one)
    code, out, _ = call("certify", "--recheck", str(rec))
    assert code == 0 and "17/17" in out


def test_frontier(files):
    code, out, _ = call("frontier", "--lambda", "20155/10000", "--cap", "12", files["tree"])
    assert code == 0
    assert "closed: yes (limit)" in out and "minimal bad vectors: 9" in out
    _, again, _ = call("frontier", "--lambda", "20155/10000", "--cap", "12", files["tree"])
    assert again == out


def test_frontier_records_recheck(files):
    _, out, _ = call("frontier", "--lambda", "20155/10000", "--format", "records", files["tree"])
    rec = files["dir"] / "f.jsonl"
    rec.write_text(out)
    code, out, _ = call("certify", "--recheck", str(rec))
    assert code == 0 and "9/9" in out


def test_verification_command(files):
    code, out, _ = call("verify-paper", "--trials", "40")
    assert code == 0
    assert out.splitlines()[-1] == "all sections passed"
    _, again, _ = call("verify-paper", "--trials", "40")
    assert again == out


def test_verification_long_mode_small(files):
    code, out, _ = call("verify-paper", "--trials", "10", "--long", "--max-order", "5", "--matrix-order", "3")
    assert code == 0 and "long mode: 7 minimal forbidden graphs up to order 5" in out
