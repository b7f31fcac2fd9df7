import io
import json
import subprocess
import sys

import pytest

from phonofeat.cli import main
from conftest import RP_IPA


def run(argv, capsys=None):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    (tmp_path / "rp.txt").write_text(RP_IPA.replace(" ", "\n") + "\n", encoding="utf-8")
    (tmp_path / "de.txt").write_text("ˈɪ ç # ʃ t ʀ ˈaː s ə .\nˈʏ b ɐ\n", encoding="utf-8")
    (tmp_path / "utts.txt").write_text(
        "p ɑ t ɑ # k ɑ p i # s u t u k ɑ # p i t ɑ p ç .\n"
        "p ɑ t ɑ .\n", encoding="utf-8")
    (tmp_path / "manual.tsv").write_text("ʀ\tɹ\n", encoding="utf-8")
    (tmp_path / "segs.txt").write_text("p\nb\nˈa\nç\n", encoding="utf-8")
    (tmp_path / "sents.txt").write_text("Ich nicht.\n\nZeit Haus\n", encoding="utf-8")
    return tmp_path


def argvs(d):
    return [
        ["schema", "show"],
        ["schema", "validate"],
        ["encode", "--ipa", "pa"],
        ["analyze", "--ipa", "ç"],
        ["frontend", "--lexicon", "builtin:de", "--mapping", "builtin:de", "--text", "Ich nicht."],
        ["frontend", "--lexicon", "builtin:de", "--mapping", "builtin:de", "--input", str(d / "sents.txt")],
        ["inventory", "--segments", str(d / "de.txt")],
        ["oos", "--inventory", str(d / "rp.txt"), "--target", str(d / "de.txt")],
        ["upr", "--inventory", str(d / "rp.txt"), "--utterances", str(d / "utts.txt")],
        ["nearest", "--inventory", str(d / "rp.txt"), "--phoneme", "ç", "-k", "3"],
        ["nearest", "--inventory", str(d / "rp.txt"), "--phoneme", "ç", "-k", "3", "--embedding", "--dim", "8"],
        ["plan", "--strategy", "auto", "--inventory", str(d / "rp.txt"), "--target", str(d / "de.txt")],
        ["plan", "--strategy", "manual", "--inventory", str(d / "rp.txt"), "--target", str(d / "de.txt"),
         "--overrides", str(d / "manual.tsv")],
        ["plan", "--strategy", "random", "--seed", "42", "--inventory", str(d / "rp.txt"),
         "--target", str(d / "de.txt"), "--dim", "4"],
        ["project", "--dim", "4", "--seed", "1", "--segments", str(d / "segs.txt"),
         "--out", str(d / "emb.csv")],
    ]


def test_encode_csv():
    code, out = run(["encode", "--ipa", "pa"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("p,phoneme,1,0,0,0")
    assert len(lines[1].split(",")) == 62


@pytest.mark.parametrize("fmt", ["csv", "json", "table"])
def test_every_subcommand_runs(files, fmt):
    for argv in argvs(files):
        code, out = run(argv + ["--format", fmt])
        assert code == 0, argv
        assert out
        if fmt == "json":
            json.loads(out)


def test_nearest_ccedilla(files):
    code, out = run(argvs(files)[9] + ["--format", "json"])
    neighbours = json.loads(out)["neighbors"]
    assert {"ipa": "ʃ", "distance": 1} in neighbours or all(n["distance"] == 1 for n in neighbours)
    code, out = run(["nearest", "--inventory", str(files / "rp.txt"), "--phoneme", "ç", "-k", "10",
                     "--format", "json"])
    assert {"ipa": "ʃ", "distance": 1} in json.loads(out)["neighbors"]


def test_upr_one_in_twenty(files):
    code, out = run(argvs(files)[8])
    data = json.loads(out)
    assert data["utterances"][0]["upr_percent"] == 5.0
    assert data["utterances"][0]["phonemes"] == 20
    assert data["summary"]["upr_mean"] == 2.5


def test_oos_counts(files):
    code, out = run(argvs(files)[7] + ["--format", "json"])
    data = json.loads(out)
    assert data["oos"] == ["a", "ç", "ɐ", "ʀ", "ʏ"]
    assert data["oos_count"] == 5


def test_manual_plan_override(files):
    code, out = run(argvs(files)[12])
    rows = {r["oos"]: r for r in json.loads(out)["resolutions"]}
    assert rows["ʀ"] == {"oos": "ʀ", "target": "ɹ", "distance": 2, "overridden": True}


def test_project_writes_csv(files):
    code, out = run(argvs(files)[14] + ["--save-weights", str(files / "w.csv")])
    assert code == 0
    lines = (files / "emb.csv").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 5 and len(lines[0].split(",")) == 6
    code, _ = run(["project", "--weights", str(files / "w.csv"), "--segments", str(files / "segs.txt"),
                   "--out", str(files / "emb2.csv")])
    assert (files / "emb2.csv").read_bytes() == (files / "emb.csv").read_bytes()


def test_domain_error_exit_1(files, capsys):
    code, _ = run(["encode", "--ipa", "Q"])
    assert code == 1
    assert "unknown IPA symbol" in capsys.readouterr().err
    code, _ = run(["frontend", "--lexicon", "builtin:de", "--mapping", "builtin:de", "--text", "Katze"])
    assert code == 1
    assert "katze" in capsys.readouterr().err
    assert run(["upr", "--inventory", str(files / "missing.txt"), "--utterances", "x"])[0] == 1


def test_usage_error_exit_2():
    assert run(["frobnicate"])[0] == 2
    assert run(["encode"])[0] == 2
    assert run(["plan", "--strategy", "nearest", "--inventory", "a", "--target", "b"])[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phonofeat", "schema", "validate"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "ok: 10 features, 60 bits\n"
