"""Command-line surface: exit codes, report shape, drawing, determinism."""

import json

import pytest

from affkl.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_bounds(capsys):
    code, out, _ = _run(capsys, "compute", "bounds", "--type", "C2")
    assert code == 0
    doc = json.loads(out)
    assert doc["result"] == {"baseline": 7, "upper": 10, "improved": 3}
    assert doc["datum_hash"] and doc["version"]


def test_verify_lemma_rho_passes(capsys):
    code, out, _ = _run(capsys, "verify", "lemma-rho", "--type", "A1")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert all(c["status"] == "pass" for c in doc["checks"])


def test_verify_main_sweep(capsys):
    code, out, _ = _run(capsys, "verify", "main", "--type", "A1",
                        "--max-len", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True and len(doc["checks"]) > 5


def test_invalid_datum_exits_2(capsys):
    code, _, err = _run(capsys, "verify", "main", "--type", "Q9")
    assert code == 2
    assert "Q9" in err


def test_missing_datum_exits_2(capsys):
    code, _, _ = _run(capsys, "compute", "bounds")
    assert code == 2


def test_compute_kl_accepts_word_and_affine_marker(capsys):
    code, out, _ = _run(capsys, "compute", "kl", "--type", "A1~",
                        "--elem", "s0 s1")
    assert code == 0
    doc = json.loads(out)
    indices = {row["index"] for row in doc["result"]}
    assert "e" in indices and len(indices) == 4


def test_compute_qa(capsys):
    code, out, _ = _run(capsys, "compute", "qa", "--type", "A1",
                        "--alcove", "s0", "--table", "builtin")
    assert code == 0
    doc = json.loads(out)
    assert sorted(r["multiplicity"] for r in doc["result"]) == [1, 1]


def test_report_is_deterministic(capsys):
    _, out1, _ = _run(capsys, "verify", "orders", "--type", "A1")
    _, out2, _ = _run(capsys, "verify", "orders", "--type", "A1")
    assert out1 == out2


def test_draw_svg_and_tikz(capsys):
    code, out, _ = _run(capsys, "draw", "--type", "C2", "--bound", "2",
                        "--shade", "restricted")
    assert code == 0
    assert out.startswith("<svg") and out.rstrip().endswith("</svg>")
    assert 'fill="#9ecae1"' in out  # something is shaded

    code, out, _ = _run(capsys, "draw", "--type", "A2", "--bound", "2",
                        "--shade", "list:A=e;D=s0", "--format", "tikz")
    assert code == 0
    assert out.startswith("\\documentclass")
    assert "{A}" in out and "{D}" in out


def test_draw_empty_shading_is_grid_only(capsys):
    code, out, _ = _run(capsys, "draw", "--type", "A2", "--bound", "2")
    assert code == 0
    assert 'fill="#9ecae1"' not in out


def test_draw_rejects_rank_one(capsys):
    code, _, err = _run(capsys, "draw", "--type", "A1")
    assert code == 2 and "rank-2" in err


def test_output_file_roundtrip(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["verify", "lemma-rho", "--type", "A1",
                 "--output", str(target)])
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["ok"] is True
