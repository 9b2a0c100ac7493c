from __future__ import annotations

import json
from pathlib import Path

import pytest

from chordknot.cli import REPORT_FIELDS, run

DIAGRAMS = Path(__file__).resolve().parent.parent / "diagrams"


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str) -> str:
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_bracket_and_mod4(capsys):
    code, out, _ = call(capsys, "bracket", DIAGRAMS / "trefoil.gd", "--mod4")
    assert code == 0
    assert out.strip() == "A^7+A^3+A^-1-A^-9  [mod 4: 3]"


def test_report_trefoil_json(capsys):
    code, out, _ = call(capsys, "report", DIAGRAMS / "trefoil.gd", "--json")
    assert code == 0
    obj = json.loads(out)
    assert list(obj) == list(REPORT_FIELDS)
    assert obj["bracket_text"] == "A^7+A^3+A^-1-A^-9"
    assert obj["orientable"] is True
    assert obj["genus"] is None and "genus" in obj["skipped"]


def test_khovanov_refuses_non_orientable(capsys):
    code, out, err = call(capsys, "khovanov", DIAGRAMS / "fail21.gd")
    assert code == 2
    assert "dsq" in err


def test_dsq_entry(capsys):
    code, out, _ = call(capsys, "dsq", DIAGRAMS / "fail21.gd")
    assert code == 0
    assert "1 ↦ 2x at (i:-1→1, j:0)" in out


def test_parse_error_exit_1(capsys, write):
    code, _, err = call(capsys, "bracket", write("bad.gd", "circle: 1+ x 1\n"))
    assert code == 1
    assert "line 1, col 12" in err


def test_validation_error_exit_1(capsys, write):
    code, _, err = call(capsys, "validate", write("bad.gd", "circle: 1+ 2 1\n"))
    assert code == 1
    assert "missing sign: chord 2" in err


def test_usage_error_exit_1(capsys):
    assert call(capsys, "frobnicate")[0] == 1
    assert call(capsys, "move", DIAGRAMS / "unknot.gd")[0] == 1


def test_cap_exit_3(capsys, monkeypatch):
    assert call(capsys, "bracket", DIAGRAMS / "trefoil.gd", "--cap", "2")[0] == 3
    monkeypatch.setenv("CHORDKNOT_KHOVANOV_CAP", "1")
    assert call(capsys, "khovanov", DIAGRAMS / "trefoil.gd")[0] == 3
    assert call(capsys, "khovanov", DIAGRAMS / "trefoil.gd", "--khovanov-cap", "5")[0] == 0


def test_surface_commands(capsys):
    assert call(capsys, "genus", DIAGRAMS / "virtual_trefoil.gd")[1].strip() == "1"
    code, out, _ = call(capsys, "checkerboard", DIAGRAMS / "trefoil_gauss.gd", "--json")
    assert json.loads(out)["colourable"] is True
    code, out, _ = call(capsys, "faces", DIAGRAMS / "trefoil_gauss.gd")
    assert "V=3 E=6 F=5 genus 0" in out
    assert call(capsys, "genus", DIAGRAMS / "trefoil.gd")[0] == 2


def test_moves_move_walk(capsys):
    code, out, _ = call(capsys, "moves", DIAGRAMS / "unknot.gd")
    lines = out.splitlines()
    assert lines[4] == "4: R2_add ((0, 0), (0, 0)) + interleaved"
    code, out, _ = call(capsys, "move", DIAGRAMS / "unknot.gd", "--apply", "4")
    assert out.strip() == "circle: 1- 2+ 1 2"
    code, out, _ = call(capsys, "walk", DIAGRAMS / "trefoil.gd", "--steps", "3", "--seed", "1", "--json")
    steps = [json.loads(line) for line in out.splitlines()]
    assert len(steps) == 4 and len({s["jones"] for s in steps}) == 1


def test_search_and_catalog(capsys):
    code, out, _ = call(capsys, "search", "--chords", "4", "--bracket=-A^10-A^-10")
    assert code == 0 and out.startswith("circle: 1- 2+ 3+ 1 4- 3 2 4")
    code, out, _ = call(capsys, "search", "--chords", "2", "--mixed-mod4")
    assert "circle: 1- 2- 1 2" in out
    code, out, _ = call(capsys, "catalog", "--chords", "1")
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["diagram"] for r in rows] == ["circle:", "circle: 1- 1", "circle: 1+ 1"]


def test_report_directory_deterministic(capsys):
    a = call(capsys, "report", DIAGRAMS)[1]
    b = call(capsys, "report", DIAGRAMS, "--jobs", "2")[1]
    assert a == b
    files = [json.loads(line)["file"] for line in a.splitlines()]
    assert files == sorted(files)


def test_report_timings_flag(capsys):
    obj = json.loads(call(capsys, "report", DIAGRAMS / "trefoil.gd", "--timings")[1])
    assert set(obj["timings"]) >= {"bracket", "khovanov"}


def test_multi_document_file(capsys, write):
    path = write("two.gd", "diagram a\ncircle: 1+ 1\ndiagram b\ncircle: 1- 1\n")
    code, out, _ = call(capsys, "bracket", path, "--json")
    assert [json.loads(l)["bracket_text"] for l in out.splitlines()] == ["A^5+A", "A^-1+A^-5"]


def test_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("circle: 1+ 2+\ncircle: 1 2\n"))
    assert call(capsys, "bracket", "-")[1].strip() == "A^6+A^2+A^-2+A^-6"
