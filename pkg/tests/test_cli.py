import io
import json
import os
import re
from collections import Counter
from pathlib import Path

import jsonschema
import pytest

from oblock.cli import default_cache_dir, run
from oblock.report import parse_payload

GOLDEN = Path(__file__).parent / "golden"
SCHEMAS = Path(__file__).parent.parent / "schemas"
REGEN = os.environ.get("OBLOCK_REGEN_GOLDEN") == "1"

CASES = {
    "group-A2-1": ["group", "--type", "A2", "--walls", "1"],
    "kl-A3": ["kl", "--type", "A3", "--x", "2", "--y", "2,1,3,2"],
    "kl-table-B2": ["kl", "--type", "B2"],
    "verma-A2": ["verma", "--type", "A2", "--x", "e"],
    "projective-A1": ["projective", "--type", "A1", "--x", "1"],
    "tilting-A1": ["tilting", "--type", "A1", "--x", "1"],
    "tilting-A2-1": ["tilting", "--type", "A2", "--walls", "1", "--all"],
    "hazi-A2": ["hazi", "--type", "A2", "--x", "e"],
    "hazi-B2-rev": ["hazi", "--type", "B2", "--x", "e", "--reverse"],
    "rigidity-A2": ["rigidity", "--type", "A2", "--all"],
    "rigidity-A3": ["rigidity", "--type", "A3", "--all"],
    "rigidity-B3-13": ["rigidity", "--type", "B3", "--walls", "1,3", "--all", "--fast"],
}


def oblock(*argv, cache=None):
    out, err = io.StringIO(), io.StringIO()
    extra = ["--cache-dir", str(cache)] if cache else ["--no-cache"]
    status = run(list(argv) + extra, out=out, err=err)
    return status, out.getvalue(), err.getvalue()


def schema_for(doc):
    name = "kl-table" if doc["command"] == "kl" and "entries" in doc else doc["command"]
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def json_numbers(doc):
    """Integers in the values of a JSON document, including those inside words and strings."""
    if isinstance(doc, dict):
        return sum((json_numbers(v) for v in doc.values()), Counter())
    if isinstance(doc, list):
        return sum((json_numbers(v) for v in doc), Counter())
    if isinstance(doc, bool) or doc is None:
        return Counter()
    return Counter(int(t) for t in re.findall(r"-?\d+", str(doc)))


def text_numbers(text):
    return Counter(int(t) for t in re.findall(r"-?\d+", text))


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    argv = CASES[name]
    outputs = {}
    for fmt in ("json", "md", "tex"):
        status, out, err = oblock(*argv, "--format", fmt)
        assert status == 0, err
        outputs[fmt] = out
        path = GOLDEN / f"{name}.{fmt}"
        if REGEN:
            path.write_text(out)
        assert out == path.read_text(), f"{path} differs"
    doc = json.loads(outputs["json"])
    jsonschema.validate(doc, schema_for(doc))
    want = json_numbers({k: v for k, v in doc.items() if k != "command"})
    assert text_numbers(outputs["md"]) == want
    assert text_numbers(outputs["tex"]) == want


@pytest.mark.parametrize("name", sorted(CASES))
def test_round_trip(name):
    _, out, _ = oblock(*CASES[name])
    doc = json.loads(out)
    record = parse_payload(doc)
    if doc["command"] == "rigidity":
        for rec, row in zip(record, doc["rows"], strict=True):
            assert rec.to_json() == {k: row[k] for k in rec.to_json()}
    elif doc["command"] == "hazi":
        assert {k: doc[k] for k in ("steps", "layers", "flag")} == record.to_json()
    elif doc["command"] in ("verma", "projective"):
        assert record.to_json() == doc["layers" if doc["command"] == "verma" else "flag"]
    elif doc["command"] == "tilting":
        assert [(f.to_json(), c.to_json()) for f, c in record] == [(m["flag"], m["layers"]) for m in doc["modules"]]
    elif doc["command"] == "group":
        assert record.to_json() == doc["block"]
    elif "entries" in doc:
        from oblock.block import get_group
        assert record.to_json(get_group(doc["group"]))["entries"] == doc["entries"]
    else:
        assert list(record.coeffs) == doc["coeffs"]


def test_spec_examples():
    status, out, _ = oblock("rigidity", "--type", "A2", "--all")
    rows = json.loads(out)["rows"]
    assert status == 0 and len(rows) == 6 and all(r["verdict"] for r in rows)
    status, out, _ = oblock("tilting", "--type", "A1", "--x", "1")
    module = json.loads(out)["modules"][0]
    assert module["flag"] == [{"element": "1", "shift": 0, "mult": 1}] and module["loewy_length"] == 1
    status, out, _ = oblock("verify", "--type", "A3")
    doc = json.loads(out)
    assert status == 0 and doc["passed"]
    assert not [r for rep in doc["reports"] for r in rep["results"] if not r["passed"]]
    jsonschema.validate(doc, schema_for(doc))
    assert parse_payload(doc)[0].passed


def test_verify_all_walls_md():
    status, out, _ = oblock("verify", "--type", "B2", "--all", "--format", "md")
    assert status == 0
    assert out.count("## B2") == 4 and "FAIL" not in out


@pytest.mark.parametrize("argv", [
    ["tilting", "--type", "Z9", "--x", "1"],
    ["tilting", "--type", "A2", "--walls", "3", "--x", "1"],
    ["tilting", "--type", "A2", "--walls", "a", "--x", "1"],
    ["tilting", "--type", "A2", "--x", "1,5"],
    ["tilting", "--type", "A2", "--x", "1;2"],
    ["tilting", "--type", "A2"],
    ["kl", "--type", "A2", "--x", "1"],
    ["frobnicate", "--type", "A2"],
    ["group"],
])
def test_usage_errors(argv):
    status = run(argv, out=io.StringIO(), err=io.StringIO())
    assert status == 2


def test_element_outside_block():
    status, out, err = oblock("tilting", "--type", "A2", "--walls", "1", "--x", "2")
    assert status == 1 and out == ""
    assert "s1s2" in err


def test_corrupt_cache(tmp_path):
    (tmp_path / "kl-A2.json").write_text("{broken")
    status, out, err = oblock("tilting", "--type", "A2", "--x", "e", cache=tmp_path)
    assert status == 1 and str(tmp_path / "kl-A2.json") in err


def test_cache_written_and_reused(tmp_path):
    status, first, _ = oblock("rigidity", "--type", "A3", "--all", cache=tmp_path)
    path = tmp_path / "kl-A3.json"
    assert status == 0 and path.exists()
    stamp = path.stat().st_mtime_ns
    status, second, _ = oblock("rigidity", "--type", "A3", "--all", cache=tmp_path)
    assert second == first and path.stat().st_mtime_ns == stamp


def test_cache_dir_resolution(monkeypatch, tmp_path):
    monkeypatch.setenv("OBLOCK_CACHE_DIR", str(tmp_path / "env"))
    assert default_cache_dir() == tmp_path / "env"
    monkeypatch.delenv("OBLOCK_CACHE_DIR")
    monkeypatch.setenv("XDG_CACHE_HOME", str(tmp_path / "xdg"))
    assert default_cache_dir() == tmp_path / "xdg" / "oblock"


def test_deterministic_output():
    a = oblock("hazi", "--type", "G2", "--x", "1", "--format", "tex")
    b = oblock("hazi", "--type", "G2", "--x", "1", "--format", "tex")
    assert a == b
