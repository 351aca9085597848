import json

import pytest

from rcc_convex.cli import main


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_check_consistent_and_show(tmp_path, capsys):
    f = write(tmp_path, "n.txt", "a NTPP b\nb DC c\n")
    assert main(["check", f, "--show"]) == 0
    out = capsys.readouterr().out
    assert "a DC c" in out


def test_check_inconsistent_reports_emptied_pair(tmp_path, capsys):
    f = write(tmp_path, "n.txt", "v1 TPP v2\nv2 PO v3\nv1 EQ v3\n")
    assert main(["check", f]) == 1
    assert "emptied via" in capsys.readouterr().out


def test_parse_error_and_missing_file(tmp_path, capsys):
    assert main(["check", write(tmp_path, "bad.txt", "a FOO b\n")]) == 64
    assert main(["check", str(tmp_path / "missing.txt")]) == 74
    assert main(["nonsense"]) == 64


def test_enumerate_weak_gap_count(capsys):
    assert main(["enumerate", "--vars", "4", "--relations", "EC,PO,TPP,TPPi",
                 "--weak", "--gap-only"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("weak gap classes: 3")


def test_gen_and_manifest(tmp_path, capsys):
    assert main(["gen"]) == 0
    listing = json.loads(capsys.readouterr().out)
    assert listing["schema_version"] == "1"
    assert any(f["family"] == "radon" for f in listing["families"])
    out = tmp_path / "k.txt"
    assert main(["gen", "--family", "k33_ec", "--out", str(out)]) == 0
    assert out.read_text().count(" EC ") == 9
    assert main(["gen", "--family", "no_such_family"]) == 64


def test_realize_verify_round_trip_is_deterministic(tmp_path, capsys):
    src = write(tmp_path, "n.txt", "a PO b\nb NTPP c\na PO c\n")
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert main(["realize", src, "--dim", "2", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["schema_version"] == "1"
    assert main(["verify", src, str(tmp_path / "r0.json")]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True
    other = write(tmp_path, "m.txt", "a DC b\nb DC c\na DC c\n")
    assert main(["verify", other, str(tmp_path / "r0.json")]) == 1


def test_realize_budget_exhaustion_exit_code(tmp_path, capsys):
    capsys.readouterr()
    assert main(["gen", "--family", "n3_1", "--out", str(tmp_path / "g.txt")]) == 0
    assert main(["realize", str(tmp_path / "g.txt"), "--dim", "1"]) == 2
    report = json.loads(capsys.readouterr().err)
    assert report["ok"] is False and report["target_dim"] == 1


def test_classify_reports_fragment(tmp_path, capsys):
    src = write(tmp_path, "n.txt", "a NTPP b\nb DC c\n")
    assert main(["classify", src]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["consistent"] is True and data["refined"] is True


def test_plot_svg(tmp_path):
    src = write(tmp_path, "n.txt", "a EC b\nb TPP c\na PO c\n")
    real = tmp_path / "r.json"
    assert main(["realize", src, "--dim", "2", "--out", str(real)]) == 0
    svg = tmp_path / "r.svg"
    assert main(["plot", str(real), "--out", str(svg)]) == 0
    text = svg.read_text()
    assert 'viewBox="0 0 800 800"' in text
    assert text.count("<polygon") == 3
    assert main(["plot", str(real), "--out", str(tmp_path / "no" / "dir.svg")]) == 74


@pytest.mark.parametrize("bad", ["{}", "not json"])
def test_verify_rejects_bad_realization_file(tmp_path, bad):
    src = write(tmp_path, "n.txt", "a DC b\n")
    assert main(["verify", src, write(tmp_path, "r.json", bad)]) == 64
