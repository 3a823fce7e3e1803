import json
import subprocess
import sys
from pathlib import Path

import pytest

from seminormal.cli import COMMANDS, EXIT_INVALID, EXIT_RESOURCE, Job, execute, main
from seminormal.matrix import matrix_document, matrix_from_document
from seminormal.poly import PolynomialRing
from seminormal.rings import ring_from_descriptor

GOLDEN = Path(__file__).parent / "golden"
JOBS = sorted((GOLDEN / "jobs").glob("*.json"))
EXIT_CODES = json.loads((GOLDEN / "expected" / "exit_codes.json").read_text())


def expected(stem, suffix):
    path = GOLDEN / "expected" / f"{stem}{suffix}"
    return path.read_text() if path.exists() else ""


def test_corpus_covers_every_command():
    assert len(JOBS) == 12
    used = {json.loads(p.read_text())["command"] for p in JOBS}
    assert used == set(COMMANDS)


@pytest.mark.parametrize("job", JOBS, ids=[p.stem for p in JOBS])
def test_golden_output(job, capsys):
    code = main(["run", str(job)])
    out, err = capsys.readouterr()
    assert out == expected(job.stem, ".out")
    assert err == expected(job.stem, ".err")
    assert code == EXIT_CODES[job.stem]


def test_console_script_is_byte_identical_across_runs():
    job = GOLDEN / "jobs" / "05_factor_cusp.json"
    runs = [
        subprocess.run([sys.executable, "-m", "seminormal.cli", "run", str(job)], capture_output=True)
        for _ in range(3)
    ]
    assert {r.stdout for r in runs} == {expected(job.stem, ".out").encode()}
    assert {r.returncode for r in runs} == {2}


def test_emitted_documents_reparse():
    for job in JOBS:
        out = expected(job.stem, ".out")
        if not out.startswith("{"):
            continue
        doc = json.loads(out)
        mdoc = doc.get("matrix", doc)
        if "entries" in mdoc:
            P = matrix_from_document(mdoc)
            assert matrix_document(P) == mdoc
        for key in ("f", "g"):
            if key in doc:
                src = json.loads(job.read_text())["matrix"]
                base = ring_from_descriptor(src["ring"])
                base = base.ambient() if hasattr(base, "ambient") else base
                R = PolynomialRing(base, tuple(src["vars"]))
                assert [R.to_str(R.parse(s)) for s in doc[key]] == doc[key]


def test_flags_match_job_files(tmp_path, capsys):
    main(["schanuel", "--semigroup", "2,3", "--out", str(tmp_path / "p.json")])
    assert (tmp_path / "p.json").read_text() == expected("07_schanuel_semigroup", ".out")
    code = main(["close", "--matrix", str(tmp_path / "p.json")])
    assert code == 0 and capsys.readouterr().out == expected("12_close_cusp", ".out")
    code = main(["gcd", "--ring", "ZZ", "2*X^2 - 2", "4*X + 4"])
    assert code == 0 and capsys.readouterr().out == "2*X + 2\n"


def test_leaf_cap_is_a_resource_error(tmp_path, capsys):
    ring = json.dumps({"type": "reduced_quotient", "base": {"type": "ZZ"}, "modulus": "30"})
    main(["schanuel", "--ring", ring, "--a", "6", "--b", "216", "--c", "36", "--out", str(tmp_path / "q.json")])
    assert main(["factor", "--matrix", str(tmp_path / "q.json"), "--max-leaves", "1"]) == EXIT_RESOURCE
    assert "resource limit" in capsys.readouterr().err
    assert main(["factor", "--matrix", str(tmp_path / "q.json"), "--max-leaves", "2"]) == 0


def test_invalid_inputs(tmp_path, capsys):
    assert main(["run", str(tmp_path / "missing.json")]) == EXIT_INVALID
    (tmp_path / "bad.json").write_text("{ nope")
    assert main(["run", str(tmp_path / "bad.json")]) == EXIT_INVALID
    assert "line 1" in capsys.readouterr().err
    assert main(["schanuel", "--ring", "QQ", "--a", "1", "--b", "2", "--c", "1"]) == EXIT_INVALID
    text, err, code = execute(Job("factor"))
    assert code == EXIT_INVALID and "needs a matrix" in err
    with pytest.raises(ValueError):
        Job.from_document({"command": "factor", "extra": 1})
