import io
import json

import pytest

from k3ade.cli import counts_from_records, main, read_csv_records


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_enumerate():
    code, out, _ = run("enumerate", "--max-rank", "2")
    assert code == 0 and out.split() == ["A1", "A1^2", "A2"]
    code, out, _ = run("enumerate", "--max-rank", "4")
    assert len(out.splitlines()) == 12
    code, out, _ = run("enumerate", "--count-only")
    assert out.strip() == "7573"


def test_usage_errors():
    assert run("enumerate", "--max-rank", "20")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("classify", "--config", "Q3")[0] == 2
    assert run("classify", "--config", "E8^3")[0] == 2


def test_single_query():
    code, out, _ = run("classify", "--config", "A2^9")
    assert code == 0
    rec = json.loads(out)
    assert rec["status"] == "PrimitiveOnly"
    code, out, _ = run("classify", "--config", "A1^12", "--budget", "2")
    assert code == 3 and json.loads(out)["status"] == "Incomplete"


def test_classify_max_rank_one(tmp_path):
    prefix = tmp_path / "r1"
    code, out, _ = run("classify", "--max-rank", "1", "--output", str(prefix), "--quiet")
    assert code == 0
    data = json.loads((tmp_path / "r1.json").read_text())
    assert data["schema"] == 1
    assert len(data["records"]) == 1
    rec = data["records"][0]
    assert rec["status"] == "Irreducible" and rec["simple"] is True
    assert (tmp_path / "r1.manifest.json").exists()


def test_exports_agree(tmp_path):
    prefix = tmp_path / "r"
    code, out, _ = run("classify", "--max-rank", "9", "--format", "both", "--output", str(prefix), "--quiet")
    assert code == 0
    js = json.loads((tmp_path / "r.json").read_text())["records"]
    cs = read_csv_records((tmp_path / "r.csv").read_text())
    assert js == cs
    manifest = json.loads((tmp_path / "r.manifest.json").read_text())
    assert manifest["counts"] == counts_from_records(js)
    assert out.strip() == "real={real} kum={kum} irr={irr} simple={simple}".format(**manifest["counts"])
    assert [r["config"] for r in js] == sorted(r["config"] for r in js)


def test_determinism_across_jobs(tmp_path):
    blobs = []
    for jobs in ("1", "2"):
        prefix = tmp_path / f"j{jobs}"
        assert run("classify", "--max-rank", "10", "--jobs", jobs, "--format", "both", "--output", str(prefix), "--quiet")[0] == 0
        blobs.append(((tmp_path / f"j{jobs}.json").read_bytes(), (tmp_path / f"j{jobs}.csv").read_bytes()))
    assert blobs[0] == blobs[1]


def test_incomplete_run_exit_code(tmp_path):
    code, _, err = run("classify", "--max-rank", "12", "--budget", "3", "--output", str(tmp_path / "x"), "--quiet")
    assert code == 3
    assert "incomplete:" in err
    data = json.loads((tmp_path / "x.json").read_text())
    assert data["partial"] is True and data["incomplete"]


def test_bad_xiao_table(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("A1^8\nnot a config\n")
    code, _, err = run("classify", "--max-rank", "1", "--xiao-table", str(bad))
    assert code == 2 and "bad.txt:2" in err


def test_verify_fixtures_small_budget():
    code, out, _ = run("verify-fixtures", "--budget", "10")
    assert code == 3
    assert "INCOMPLETE" in out and "FAIL " not in out


@pytest.mark.slow
def test_verify_fixtures():
    code, out, _ = run("verify-fixtures")
    assert code == 0, out
    assert out.strip().endswith("20/20 fixtures pass")
