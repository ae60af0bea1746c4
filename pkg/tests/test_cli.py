import json
import subprocess
import sys

import pytest

from siftsum.cli import main
from siftsum.sequences import SievedSequence


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sieve_csv(capsys):
    code, out, _ = run(capsys, "sieve", "--kind", "gaussian", "--limit", "100", "--format", "csv")
    assert code == 0
    assert out.split() == ["1", "5", "13", "17", "25", "29", "37", "41", "53", "61", "65",
                           "73", "85", "89", "97"]


def test_sieve_bitmap(tmp_path, capsys):
    path = tmp_path / "b.bin"
    code, _, _ = run(capsys, "sieve", "--kind", "loeschian", "--limit", "10", "--out", str(path))
    assert code == 0
    seq = SievedSequence.from_bytes(path.read_bytes())
    assert seq.members().tolist() == [1, 3, 7]


def test_sieve_bitmap_needs_out(capsys):
    code, _, err = run(capsys, "sieve", "--limit", "10")
    assert code == 1 and "--out" in err


def test_sum(capsys):
    code, out, _ = run(capsys, "sum", "--alpha", "rat:1/2", "--N", "1e4")
    lines = out.strip().splitlines()
    assert lines[0] == "re,im,abs,terms"
    re, im, ab, terms = lines[1].split(",")
    assert float(re) == -1074 and int(terms) == 1074


def test_sum_dyadic_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "sum", "--alpha", "rat:0/1", "--N", "100",
                       "--window", "dyadic")
    assert json.loads(out)[0]["terms"] == 7


def test_approx(capsys):
    code, out, _ = run(capsys, "approx", "--alpha", "quad:golden", "--Q", "50")
    assert out.splitlines()[1].split(",")[:2] == ["21", "34"]
    code, out, _ = run(capsys, "approx", "--alpha", "dec:0.4142135623730950488", "--Q", "10")
    assert out.splitlines()[1].split(",")[:2] == ["2", "5"]


def test_verify(tmp_path, capsys):
    path = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--theorem", "2", "--alpha", "quad:sqrt2",
                     "--N-list", "1e3,1e4", "--H", "2", "--eps", "0", "--out", str(path))
    assert code == 0
    rows = json.loads(path.read_text())
    assert [r["params"]["N"] for r in rows] == [1000, 10000]
    assert set(rows[0]) == {"lemma_id", "lhs", "rhs", "ratio", "params"}


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--alpha", "rat:0/1", "--N", "100", "--M", "2",
                       "--z", "3")
    rows = [l.split(",") for l in out.strip().splitlines()[1:]]
    assert [(r[0], float(r[1])) for r in rows] == [("S1", 12.0), ("S2", 5.0), ("S3", 0.0)]


@pytest.mark.parametrize("lid, params", [
    ("vino", "alpha=rat:1/2,X=4,Y=10"),
    ("kernel", "x=1,T=100,beta=3"),
    ("linear", "alpha=quad:golden,N=2000"),
    ("hbilinear", "alpha=quad:golden,N=2000,H=3"),
])
def test_lemma(capsys, lid, params):
    code, out, _ = run(capsys, "--seed", "3", "lemma", "--id", lid, "--params", params)
    assert code == 0
    header, row = out.strip().splitlines()
    assert header.startswith("lemma_id,lhs,rhs,ratio")
    assert row.startswith(lid + ",")


def test_quadform(capsys):
    code, out, _ = run(capsys, "quadform", "--op", "M3", "--params", "H=1,P=1,coprime=0")
    assert out.splitlines()[1].startswith("M3,1921,hashed")
    code, out, _ = run(capsys, "quadform", "--op", "bhb", "--params", "h1=2,h2=3,h3=1,h4=1,P=50")
    assert ",6,3,1,True" in out.splitlines()[1]


def test_usage_errors(capsys):
    assert run(capsys, "approx", "--alpha", "rat:1/0", "--Q", "5")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["approx", "--alpha", "rat:1/3"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    assert run(capsys, "quadform", "--op", "binary", "--params", "a=1")[0] == 1
    assert run(capsys, "lemma", "--id", "vino", "--params", "X")[0] == 1


def test_suite(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SIFTSUM_THREADS", "2")
    path = tmp_path / "s.json"
    code, _, _ = run(capsys, "--out", str(path), "suite", "--suite", "theorem1",
                     "--alpha", "quad:golden", "--alpha", "rat:1/3", "--N-list", "1e3,1e4")
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["meta"]["threads"] == 2
    assert len(doc["rows"]) == 4
    assert (tmp_path / "s.csv").exists()


def test_suite_empty_list(tmp_path, capsys):
    code, _, _ = run(capsys, "suite", "--N-list", "", "--out", str(tmp_path / "x.json"))
    assert code == 1


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "siftsum.cli", "--version"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip()
