"""CLI surface: exit codes, byte determinism, golden regression, sweep CSV."""

import json
import shutil
from pathlib import Path

from cmwitness import cli
from cmwitness.cli import GOLDEN_DIR, GOLDEN_NAMES, main


def write_job(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_classify_to_file_and_stdout(tmp_path, capsys):
    job = write_job(
        tmp_path,
        "job.json",
        {"variables": ["X", "Y"], "f": "X^2+2", "g": "Y^2+2"},
    )
    out = tmp_path / "report.json"
    assert main(["classify", "--job", job, "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    report = json.loads(text)
    assert report["case"] == "CaseB_productNotS2w4"
    assert report["cm"] is True
    assert report["timings"] is None
    capsys.readouterr()
    assert main(["classify", "--job", job]) == 0
    assert capsys.readouterr().out == text


def test_classify_deterministic(tmp_path):
    job = write_job(
        tmp_path,
        "job.json",
        {
            "variables": ["V", "X", "Y"],
            "f": "V^2*X^2-2*X^2+4",
            "g": "V^2*Y^2-2*Y^2+4",
        },
    )
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["classify", "--job", job, "--out", str(out1)]) == 0
    assert main(["classify", "--job", job, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_classify_rejections(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    assert main(["classify", "--job", str(bad_json)]) == 2
    assert main(["classify", "--job", str(tmp_path / "missing.json")]) == 2
    parse_err = write_job(
        tmp_path, "p.json", {"variables": ["X"], "f": "X^2+*", "g": "X"}
    )
    assert main(["classify", "--job", parse_err]) == 2
    squarefree = write_job(
        tmp_path,
        "sf.json",
        {"variables": ["X", "Y"], "f": "X^2*Y^2+2*X^2", "g": "Y^2+2"},
    )
    assert main(["classify", "--job", squarefree]) == 2
    err = capsys.readouterr().err
    assert "squarefree_f" in err
    bad_opt = write_job(
        tmp_path,
        "opt.json",
        {"variables": ["X"], "f": "X", "g": "X+2", "options": {"bogus": 1}},
    )
    assert main(["classify", "--job", bad_opt]) == 2


def test_classify_structured_reason_is_json(tmp_path, capsys):
    squarefree = write_job(
        tmp_path,
        "sf.json",
        {"variables": ["X"], "f": "X^2", "g": "X"},
    )
    assert main(["classify", "--job", squarefree]) == 2
    reason = json.loads(capsys.readouterr().err)
    assert reason["error"] == "HypothesisViolationError"
    assert reason["predicate"] == "squarefree_f"


def test_regress_green(capsys):
    assert main(["regress"]) == 0
    out = capsys.readouterr().out
    assert "regress: 8/8 green" in out


def test_regress_detects_corruption(tmp_path, monkeypatch, capsys):
    fake = tmp_path / "golden"
    shutil.copytree(GOLDEN_DIR, fake)
    target = fake / "case_b_synthetic.report.json"
    target.write_text(
        target.read_text(encoding="utf-8").replace("CaseB", "CaseX"),
        encoding="utf-8",
    )
    monkeypatch.setattr(cli, "GOLDEN_DIR", fake)
    assert main(["regress"]) == 1
    out = capsys.readouterr().out
    assert "FAIL case_b_synthetic" in out


def test_regress_missing_golden(tmp_path, monkeypatch):
    fake = tmp_path / "golden"
    shutil.copytree(GOLDEN_DIR, fake)
    (fake / "example_3_2.report.json").unlink()
    monkeypatch.setattr(cli, "GOLDEN_DIR", fake)
    assert main(["regress"]) == 2


def test_golden_corpus_complete():
    assert len(GOLDEN_NAMES) == 6
    for name in GOLDEN_NAMES:
        assert (GOLDEN_DIR / (name + ".job.json")).is_file()
        assert (GOLDEN_DIR / (name + ".report.json")).is_file()


def test_sweep_case_b_family(tmp_path):
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["X", "Y"],
            "parameters": [
                {"name": "s", "values": [1, 3, 5]},
                {"name": "t", "values": [1, 3, 5]},
            ],
            "f": "X^2+2*s",
            "g": "Y^2+2*t",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "s,t,case,cm,q_shape"
    assert len(lines) == 10
    for line in lines[1:]:
        assert line.endswith("CaseB_productNotS2w4,true,Grade3CI_NotTwoGen")
    # LF only, no CR.
    assert b"\r" not in out.read_bytes()


def test_sweep_empty_range(tmp_path):
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["X", "Y"],
            "parameters": [{"name": "s", "values": []}],
            "f": "X^2+2*s",
            "g": "Y^2+2",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8") == "s,case,cm,q_shape\n"


def test_sweep_rejected_rows(tmp_path):
    # s = 0 makes f = X^2, which is not squarefree; the row records the
    # rejection instead of poisoning the rest of the family.
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["X", "Y"],
            "parameters": [{"name": "s", "values": [0, 1]}],
            "f": "X^2+2*s",
            "g": "Y^2+2",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[1] == "0,rejected_squarefree_f,,"
    assert lines[2].startswith("1,CaseB")


def test_sweep_range_parameters(tmp_path):
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["X", "Y"],
            "parameters": [{"name": "s", "range": [1, 3]}],
            "f": "X^2+2*s",
            "g": "Y^2+2",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["1", "2", "3"]


def test_sweep_resource_guard(tmp_path):
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["X", "Y"],
            "parameters": [
                {"name": "s", "range": [1, 100]},
                {"name": "t", "range": [1, 100]},
            ],
            "f": "X^2+2*s",
            "g": "Y^2+2*t",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 2
    assert not out.exists()


def test_sweep_bad_family(tmp_path):
    fam = write_job(
        tmp_path,
        "fam.json",
        {"variables": ["X"], "parameters": [{"name": "X", "values": [1]}], "f": "X", "g": "X"},
    )
    assert main(["sweep", "--family", fam, "--out", str(tmp_path / "o.csv")]) == 2


def test_sweep_mixed_case_family(tmp_path):
    # Degenerating family 1: t scales the even part of f.  t=1 keeps
    # the grade-2 geometry; t=2 pushes f into S^{2 wedge 4} and the
    # pair becomes S-free CaseA.
    fam = write_job(
        tmp_path,
        "fam.json",
        {
            "variables": ["V", "X", "Y"],
            "parameters": [{"name": "t", "values": [1, 2]}],
            "f": "V^2*X^2-2*t*X^2+4",
            "g": "V^2*Y^2-2*Y^2+4",
        },
    )
    out = tmp_path / "rows.csv"
    assert main(["sweep", "--family", fam, "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[1].split(",")[1] == "CaseC_NonCM_grade2"
    assert lines[2].split(",")[1] == "CaseA_oneHypersurfaceNonNormal"
