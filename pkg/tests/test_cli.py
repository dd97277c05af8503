import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from rfgrowth.cli import main

PRES = Path(__file__).resolve().parent.parent / "presentations"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_growth_csv():
    code, out, _ = run("growth", "--pres", PRES / "free2.grp", "--class", "GL", "--limit", 200, "--radius", 3)
    assert code == 0
    rs = rows(out)
    assert len(rs) == 3
    assert list(rs[0]) == ["m", "class", "value", "argmax_word", "witness_group", "exhausted_flag", "tag"]
    values = [int(r["value"]) for r in rs]
    assert values == sorted(values)
    assert all(r["tag"] in ("exact", "upper-bound", "lower-bound") for r in rs)


def test_growth_json_mirror():
    code, out, _ = run("growth", "--pres", PRES / "z.grp", "--class", "ALL", "--radius", 6, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    text = json.dumps(doc)
    assert '"value": 4' in text


def test_atlas_c4():
    code, out, _ = run("atlas", "--family", "C", "--n", 4, "--q", 3)
    assert code == 0
    entry = json.loads(out)["entry"]
    assert entry["r"]["value"] == 8 and entry["r"]["tag"] == "exact"
    assert entry["name"] == "PSp(8,3)"


def test_atlas_threshold():
    code, out, _ = run("atlas", "--threshold", 10, "--kind", "GL")
    assert code == 0 and json.loads(out)["threshold"]["R"] == {"tag": "upper-bound", "value": 11}


def test_detect_z():
    code, out, _ = run("detect", "--pres", PRES / "z.grp", "--word", "a^6", "--class", "SIMPLE", "--limit", 100)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == 5 and doc["witness_group"] == "Cyclic(5)" and doc["tag"] == "exact"


def test_certify_json():
    code, out, _ = run("certify", "--pres", PRES / "free2.grp", "--words", "a,b")
    doc = json.loads(out)
    assert code == 0 and doc["common_multiple"] == "ABab" and doc["verified"] is True


def test_induce_json():
    code, out, _ = run("induce", "--pres", PRES / "free2.grp", "--target", "Cyclic(2)", "--images", "1;0",
                       "--base", "[[1]];[[2]];[[1]]", "--q", 3, "--word", "aa")
    doc = json.loads(out)
    assert code == 0 and doc["rank"]["value"] == 3 and doc["word_image"] == "[[2,0],[0,2]]"
    assert doc["schreier_generators"] == ["b", "aa", "abA"]


def test_experiment_csv():
    code, out, _ = run("experiment", "--pres", PRES / "free2.grp", "--gamma", "a", "--gamma0", "ab", "--jmax", 2)
    (r,) = rows(out)
    assert code == 0 and r["j"] == "2" and r["witnesses_ok"] == "1"


@pytest.mark.parametrize("argv,code", [
    (["detect", "--pres", "missing.grp", "--word", "a"], 3),
    (["detect", "--pres", PRES / "z.grp", "--word", "a("], 3),
    (["growth", "--pres", PRES / "free2.grp", "--radius", 3, "--ball-budget", 5], 4),
    (["certify", "--pres", PRES / "z.grp", "--words", "a,a"], 6),
    (["atlas", "--family", "B", "--n", 1, "--q", 3], 7),
    (["detect", "--pres", PRES / "z.grp", "--word", "a", "--limit", 0], 3),
])
def test_error_exit_codes(argv, code):
    got, out, err = run(*argv)
    assert got == code and out == ""
    rec = json.loads(err)
    assert rec["exit_code"] == code and rec["message"]


def test_unsupported_presentation(tmp_path):
    p = tmp_path / "z2.grp"
    p.write_text("gens: a,b\nrels: [a,b]\n")
    code, _, err = run("detect", "--pres", p, "--word", "a")
    assert code == 5 and json.loads(err)["error"] == "unsupported-presentation"


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# growth settings\nradius = 2\nclass = ALL\nlimit = 50\n")
    _, out, _ = run("growth", "--pres", PRES / "z.grp", "--config", cfg)
    rs = rows(out)
    assert len(rs) == 2 and rs[0]["class"] == "ALL"
    _, out, _ = run("growth", "--pres", PRES / "z.grp", "--config", cfg, "--radius", 4, "--class", "GL")
    rs = rows(out)
    assert len(rs) == 4 and rs[0]["class"] == "GL"


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("radius\n")
    code, _, _ = run("growth", "--pres", PRES / "z.grp", "--config", cfg)
    assert code == 3


def test_byte_identical_across_jobs():
    base = ["growth", "--pres", PRES / "free2.grp", "--class", "SIMPLE", "--limit", 60, "--radius", 2]
    outs = {run(*base, "--jobs", j)[1] for j in (1, 2, 4)}
    assert len(outs) == 1
    base = ["detect", "--pres", PRES / "free2.grp", "--word", "[a,b]", "--class", "ALL", "--limit", 60]
    assert run(*base, "--jobs", 1)[1] == run(*base, "--jobs", 3)[1]


def test_table_format():
    code, out, _ = run("growth", "--pres", PRES / "z.grp", "--radius", 2, "--format", "table")
    assert code == 0 and "value" in out.splitlines()[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rfgrowth", "detect", "--pres", str(PRES / "z.grp"),
                           "--word", "a^2", "--class", "GL", "--limit", "20"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == 3
