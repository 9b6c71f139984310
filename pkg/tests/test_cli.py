import csv
import io
import json
import os
import subprocess
import sys

import pytest

from convring import cli
from convring.kernel import char_zero_product


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize(
    "argv, first_line",
    [
        (("product", "--char", "2", "-m", "3", "-n", "3"), "f3*f3 = f1 + 2 f4"),
        (("product", "--char", "0", "-m", "2", "-n", "3"), "f2*f3 = f2 + f4"),
        (("product", "--char", "3", "-m", "2", "-n", "3"), "f2*f3 = 2 f3"),
        (("product", "--char", "2", "-m", "3", "-n", "3", "--law", "multiplicative"), "f3*f3 = f1 + 2 f4"),
    ],
)
def test_product_golden(argv, first_line):
    code, text = run(*argv)
    assert code == 0
    assert text.splitlines()[0] == first_line


def test_product_checksums_and_oracle():
    code, text = run("product", "--char", "5", "-m", "4", "-n", "7", "--oracle")
    assert code == 0
    assert text.splitlines()[1:] == ["sum lambda = 4 (expected 4)", "sum i*lambda = 28 (expected 28)"]
    assert run("product", "--char", "0", "-m", "6", "-n", "6", "--oracle")[0] == 0


def test_product_json():
    code, text = run("product", "--char", "2", "-m", "3", "-n", "3", "--format", "json")
    doc = json.loads(text)
    assert code == 0
    assert doc["lambda"] == [[1, 1], [4, 2]] and doc["consistent"]


def test_custom_law_file(tmp_path):
    path = tmp_path / "law.json"
    path.write_text(json.dumps({"p": 3, "coeffs": [[1, 0, 1], [0, 1, 1], [2, 2, 1]]}))
    code, text = run("product", "--char", "3", "-m", "2", "-n", "3", "--law", str(path), "--oracle")
    assert code == 0 and text.startswith("f2*f3 = 2 f3")


def test_bad_law_file(tmp_path):
    path = tmp_path / "law.json"
    path.write_text(json.dumps({"p": 3, "coeffs": [[1, 0, 1], [0, 1, 1], [2, 0, 1]]}))
    assert run("product", "--char", "3", "-m", "2", "-n", "3", "--law", str(path))[0] == 2
    assert run("product", "--char", "5", "-m", "2", "-n", "3", "--law", str(path))[0] == 2
    assert run("product", "--char", "3", "-m", "2", "-n", "3", "--law", str(tmp_path / "none.json"))[0] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("product", "--char", "4", "-m", "1", "-n", "1"),
        ("product", "--char", "2", "-m", "0", "-n", "1"),
        ("product", "--char", "x", "-m", "1", "-n", "1"),
        ("structure", "--char", "0", "--nu", "1"),
        ("verify", "--suite", "nonsense"),
        ("table", "--char", "2"),
        (),
    ],
)
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_table_json(tmp_path):
    out = tmp_path / "t.json"
    assert run("table", "--char", "2", "--max", "8", "--out", str(out))[0] == 0
    first = out.read_bytes()
    doc = json.loads(first)
    assert doc["char"] == 2 and doc["max_rank"] == 8 and len(doc["cells"]) == 36
    assert run("table", "--char", "2", "--max", "8", "--out", str(out), "--workers", "3")[0] == 0
    assert out.read_bytes() == first


def test_table_csv():
    code, text = run("table", "--char", "0", "--max", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    cells = {}
    for row in rows:
        cells.setdefault((int(row["m"]), int(row["n"])), {})[int(row["i"])] = int(row["lambda"])
    assert len(cells) == 15
    for (m, n), lam in cells.items():
        assert lam == char_zero_product(m, n).as_dict()


def test_table_write_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("table", "--char", "2", "--max", "3", "--out", str(blocker / "t.json"))[0] == 3


def test_cache_reuse_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    assert run("product", "--char", "3", "-m", "4", "-n", "6")[0] == 0
    cache = tmp_path / "table-p3.json"
    doc = json.loads(cache.read_text())
    assert [(c["m"], c["n"]) for c in doc["cells"]] == [(4, 6)]
    code, text = run("table", "--char", "3", "--max", "3")
    assert code == 0 and len(json.loads(text)["cells"]) == 6
    assert len(json.loads(cache.read_text())["cells"]) == 7


def test_corrupt_cache_refused(tmp_path):
    cache = tmp_path / "c.json"
    cache.write_text(json.dumps({"char": 2, "max_rank": 3, "cells": [{"m": 3, "n": 3, "lambda": [[3, 3]]}]}))
    assert run("product", "--char", "2", "-m", "3", "-n", "3", "--cache", str(cache))[0] == 1
    assert run("table", "--char", "2", "--max", "3", "--cache", str(cache))[0] == 1
    cache.write_text(json.dumps({"char": 3, "max_rank": 1, "cells": []}))
    assert run("table", "--char", "2", "--max", "3", "--cache", str(cache))[0] == 2


def test_verify_passes():
    code, text = run("verify", "--suite", "kernel,ring", "--char", "2,3", "--max", "6")
    doc = json.loads(text)
    assert code == 0 and doc["passed"]
    assert [s["suite"] for s in doc["suites"]] == ["kernel", "ring"]


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--suite", "laws", "--char", "2,3,5", "--max", "24"),
        ("verify", "--suite", "lucas", "--char", "2,3,5"),
        ("verify", "--suite", "structure", "--char", "2", "--nu", "6"),
    ],
)
def test_verify_examples(argv):
    code, text = run(*argv)
    assert code == 0 and json.loads(text)["passed"]


def test_verify_reports_counterexample(monkeypatch, capsys):
    from convring import verify

    real = verify.max_block_index
    monkeypatch.setattr(verify, "max_block_index", lambda m, n, p: real(m, n, p) + (m == n == 3))
    code, text = run("verify", "--suite", "kernel", "--char", "2", "--max", "4")
    assert code == 1
    assert not json.loads(text)["passed"]
    assert "(3, 3, 2, 5, 4)" in capsys.readouterr().err


def test_structure():
    code, text = run("structure", "--char", "2", "--nu", "2")
    doc = json.loads(text)
    assert code == 0 and doc["snf"] == [1, 2, 4] and doc["conductor"] == [2, 4, 4]
    doc = json.loads(run("structure", "--char", "3", "--nu", "0")[1])
    assert doc["snf"] == [1] and "conductor" not in doc
    doc = json.loads(run("structure", "--char", "5", "--nu", "3")[1])
    assert doc["conductor"] == [5, 25, 125, 125]


def test_deterministic_bytes():
    assert run("structure", "--char", "3", "--nu", "4") == run("structure", "--char", "3", "--nu", "4")


def test_module_entry_point():
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "convring", "product", "--char", "2", "-m", "3", "-n", "3"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "f3*f3 = f1 + 2 f4"
