import json
import subprocess
import sys
from pathlib import Path

import pytest

from ranklaw.cli import main
from ranklaw.corpus import parse_rank_tsv

SMALL_GRID = ["--gamma-lo", "0", "--gamma-hi", "6", "--gamma-step", "0.05"]


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def synth_tsv(tmp_path):
    path = tmp_path / "law.tsv"
    assert run("synth", "--alpha", 0.9, "--beta", 1.5, "--log10-gamma", 3,
               "--log10-C", 11, "--max-rank", 20000, "-o", path) == 0
    return path


def test_synth_flat_law(capsys):
    assert run("synth", "--alpha", 0, "--beta", 0, "--log10-C", 1, "--log10-gamma", 0, "--max-rank", 5) == 0
    ranks, freqs, tokens, total = parse_rank_tsv(capsys.readouterr().out)
    assert ranks == [1, 2, 3, 4, 5]
    assert freqs == [10] * 5
    assert total == 50


def test_count(tmp_path, capsys):
    text = tmp_path / "t.txt"
    text.write_text("The the cat.\n", encoding="utf-8")
    assert run("count", text, "--lowercase", "--strip-punct") == 0
    ranks, freqs, tokens, total = parse_rank_tsv(capsys.readouterr().out)
    assert list(zip(tokens, freqs)) == [("the", 2), ("cat", 1)]
    assert total == 3


def test_count_characters_to_file(tmp_path):
    text, out = tmp_path / "t.txt", tmp_path / "c.tsv"
    text.write_text("a b a", encoding="utf-8")
    assert run("count", text, "--unit", "character", "-o", out) == 0
    _, freqs, tokens, _ = parse_rank_tsv(out.read_text())
    assert dict(zip(tokens, freqs)) == {"a": 2, " ": 2, "b": 1}


def test_estimate_writes_json_and_trace(tmp_path, synth_tsv):
    out = tmp_path / "law.json"
    assert run("estimate", synth_tsv, "-o", out, *SMALL_GRID) == 0
    doc = json.loads(out.read_text())
    trace = tmp_path / "law.trace.tsv"
    assert doc["trace_path"] == str(trace)
    assert len(trace.read_text().splitlines()) == 1 + 121
    assert doc["estimated"]["log10_gamma"] == pytest.approx(3.0, abs=0.3)
    assert doc["fitted"] is None


def test_fit_from_estimate_matches_one_shot(tmp_path, synth_tsv):
    est, two, one = tmp_path / "e.json", tmp_path / "two.json", tmp_path / "one.json"
    assert run("estimate", synth_tsv, "-o", est, *SMALL_GRID) == 0
    assert run("fit", synth_tsv, "--init", est, "-o", two) == 0
    assert run("fit", synth_tsv, "-o", one, *SMALL_GRID) == 0
    a, b = json.loads(two.read_text()), json.loads(one.read_text())
    assert a["fitted"] == b["fitted"]
    assert a["rmse_fitted"] == b["rmse_fitted"]
    assert a["rmse_fitted"] <= a["rmse_estimated"] + 1e-9


def test_fit_accepts_bare_parameters(tmp_path, synth_tsv):
    init = tmp_path / "p.json"
    init.write_text(json.dumps({"alpha": 1.0, "beta": 1.4, "log10_gamma": 3.1, "log10_C": 11.1}))
    out = tmp_path / "f.json"
    assert run("fit", synth_tsv, "--init", init, "-o", out) == 0
    doc = json.loads(out.read_text())
    assert doc["fitted"]["alpha"] == pytest.approx(0.9, abs=0.05)


def test_plot(tmp_path, synth_tsv, capsys):
    res = tmp_path / "law.json"
    assert run("fit", synth_tsv, "-o", res, *SMALL_GRID) == 0
    assert run("plot", synth_tsv, res, "--outdir", tmp_path / "plots") == 0
    written = capsys.readouterr().out.split()
    assert [Path(p).name for p in written] == ["law.gamma.tsv", "law.curve.tsv", "law.gp"]
    rows = [l for l in open(written[0]) if not l.startswith("#")]
    assert len(rows) == 121


def test_batch_directory(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    for name, c in (("a", 10), ("b", 11)):
        assert run("synth", "--alpha", 0.9, "--beta", 1.5, "--log10-gamma", 3,
                   "--log10-C", c, "--max-rank", 5000, "-o", src / f"{name}.tsv") == 0
    out = tmp_path / "out"
    assert run("estimate", src, "-o", out, *SMALL_GRID) == 0
    assert sorted(p.name for p in out.iterdir()) == ["a.json", "a.trace.tsv", "b.json", "b.trace.tsv"]
    assert json.loads((out / "b.json").read_text())["corpus_id"] == "b"


def test_errors_exit_one(tmp_path, capsys):
    assert run("estimate", tmp_path / "missing.tsv") == 1
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\t3\n2\t5\n")
    assert run("estimate", bad) == 1
    single = tmp_path / "one.tsv"
    single.write_text("1\t7\tx\n")
    assert run("estimate", single) == 1
    err = capsys.readouterr().err
    assert err.count("ranklaw: error:") == 3
    with pytest.raises(SystemExit) as info:
        run("estimate", "--gamma-step", "abc", "x.tsv")
    assert info.value.code == 1


def test_decode_error_names_offset(tmp_path, capsys):
    path = tmp_path / "latin.txt"
    path.write_bytes(b"ab\xe9cd")
    assert run("count", path) == 1
    assert "offset 2" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ranklaw", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "estimate" in proc.stdout
