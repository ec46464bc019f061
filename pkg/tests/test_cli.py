import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from toric_ricci import documents
from toric_ricci.cli import main
from toric_ricci.exceptions import SchemaError

GOLDEN = Path(__file__).parent / "golden"


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "toric_ricci", *args], capture_output=True, text=True)


def test_golden_su2_report_byte_exact(tmp_path):
    out = tmp_path / "report.json"
    assert main(["compute", "--example", "su2-cp1", "--output", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / "su2-cp1.json").read_bytes()


def test_reports_are_deterministic():
    for name in documents.CATALOG:
        a = documents.emit_report(documents.run(documents.catalog(name)))
        b = documents.emit_report(documents.run(documents.catalog(name)))
        assert a == b


@pytest.mark.parametrize("name", sorted(documents.CATALOG))
def test_round_trip(name, tmp_path):
    doc = documents.catalog(name)
    path = tmp_path / "doc.json"
    path.write_text(documents.emit_document(doc), encoding="utf-8")
    reparsed = json.loads(path.read_text(encoding="utf-8"))
    assert documents.emit_report(documents.run(reparsed)) == documents.emit_report(documents.run(doc))


def test_exact_strings_reparse():
    report = documents.run(documents.catalog("a2-full-flag"))
    assert documents.parse_rational(report["R"]["exact"], "R") == Fraction(25, 31)
    for s, d in zip(report["P"]["exact"], report["P"]["decimal"]):
        assert abs(float(documents.parse_rational(s, "P")) - float(d)) < 1e-12


def test_catalog_values():
    assert documents.run(documents.catalog("su2-cp1"))["R"]["exact"] == "6/7"
    assert documents.run(documents.catalog("toric-p2"))["R"]["exact"] == "1"
    assert documents.run(documents.catalog("toric-blowup-p2"))["R"]["exact"] == "6/7"
    with pytest.raises(SchemaError):
        documents.catalog("nope")


@pytest.mark.parametrize("mutate,path", [
    (lambda d: d["tau"].__setitem__("matrix", [["1/0"]]), "$.tau.matrix[0][0]"),
    (lambda d: d["tau"].__setitem__("matrix", [["0.5"]]), "$.tau.matrix[0][0]"),
    (lambda d: d.__setitem__("query", "volume"), "$.query"),
    (lambda d: d["fiber"].__setitem__("rays", [[1], [-1, 0]]), "$.fiber.rays[1]"),
    (lambda d: d.pop("lie"), "$.lie"),
    (lambda d: d.__setitem__("extra", 1), "$.extra"),
])
def test_schema_errors_name_the_field(mutate, path):
    doc = documents.catalog("su2-cp1")
    mutate(doc)
    with pytest.raises(SchemaError) as e:
        documents.run(doc)
    assert e.value.path == path


def test_ample_query():
    doc = documents.catalog("su2-cp1")
    doc.update(query="ample", lifted_polytope=[["1", "1"], ["-1", "1"]], character=["0"])
    report = documents.run(doc)
    assert report["verdicts"]["ample"]["status"] == "not_ample"
    assert report["verdicts"]["ample"]["witness"]["vertex"] == ["-1/2"]
    doc["character"] = ["2"]
    assert documents.run(doc)["verdicts"]["ample"]["status"] == "ample"


def test_fano_query_and_toric_polytope():
    doc = documents.catalog("a2-partial-flag")
    doc["query"] = "fano"
    report = documents.run(doc)
    assert report["verdicts"]["fano"]["status"] == "ample" and "R" not in report
    toric = {"query": "toric_ricci", "fiber": {"dim": 1, "rays": [[1], [-1]]},
             "toric_polytope": [["1", "1"], ["-1", "2"]]}
    # barycenter 1/2 on [-1, 2]; facet y + 1 gives t <= 1 / (3/2)
    assert documents.run(toric)["R"]["exact"] == "2/3"


def test_exit_codes(tmp_path):
    bad = tmp_path / "bad.json"
    doc = documents.catalog("su2-cp1")
    doc["tau"]["matrix"] = [["1/0"]]
    bad.write_text(json.dumps(doc))
    r = _cli("compute", "--input", str(bad))
    assert r.returncode == 2 and "$.tau.matrix[0][0]" in r.stderr

    doc["tau"]["matrix"] = [["3"]]
    bad.write_text(json.dumps(doc))
    r = _cli("compute", "--input", str(bad))
    assert r.returncode == 3 and "not Fano" in r.stderr

    doc = documents.catalog("a2-full-flag")
    doc["lie"]["positive_m_roots"] = [[1, 0], [0, 1], [-1, -1]]
    bad.write_text(json.dumps(doc))
    r = _cli("compute", "--input", str(bad))
    assert r.returncode == 3 and "witness" in r.stderr

    bad.write_text("{not json")
    assert _cli("compute", "--input", str(bad)).returncode == 2
    assert _cli("compute", "--example", "missing").returncode == 2


def test_text_format_and_catalog_listing():
    r = _cli("compute", "--example", "su2-cp1", "--format", "text")
    assert r.returncode == 0
    assert "Delta_M (x2pi) vertices:" in r.stdout and "R: 6/7" in r.stdout
    r = _cli("catalog", "--list")
    assert r.stdout.split() == list(documents.CATALOG)
    r = _cli("catalog", "su2-cp1")
    assert json.loads(r.stdout) == documents.parse_document(documents.catalog("su2-cp1"))


def test_oracle_check_flag(tmp_path):
    out = tmp_path / "r.json"
    assert main(["compute", "--example", "su2-cp1", "--oracle-check", "--grid", "100000",
                 "--output", str(out)]) == 0
    oc = json.loads(out.read_text())["oracle_check"]
    assert oc["integration_ok"] and oc["bisection_ok"]
    assert main(["compute", "--example", "su2-cp1", "--timing", "--output", str(out)]) == 0
    assert "timing_seconds" in json.loads(out.read_text())
