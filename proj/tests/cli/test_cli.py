"""End-to-end checks of the mtal command-line tool.

usage: test_cli.py MTAL_BINARY WORK_DIR
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

BIN = Path(sys.argv[1])
WORK = Path(sys.argv[2])

failures = []


def run(*args, expect=0):
    proc = subprocess.run([str(BIN), *map(str, args)], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{' '.join(map(str, args))}: exit {proc.returncode}, wanted {expect}\n"
            f"stdout:\n{proc.stdout}\nstderr:\n{proc.stderr}"
        )
    return proc


def check(name):
    def wrap(fn):
        try:
            fn()
            print(f"ok   {name}")
        except Exception as e:  # report and keep going
            print(f"FAIL {name}: {e}")
            failures.append(name)
        return fn

    return wrap


def stats(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)
DATA = WORK / "data"
run("synth", "--out", DATA, "--train-size", 400, "--dev-size", 150, "--test-size", 150)
CORPUS = (DATA / "corpus.cfg").read_text().split("schema_version = 1", 1)[1]

SMALL = WORK / "small.cfg"
SMALL.write_text("schema_version = 1\n[train]\nmax_epochs = 3\nhidden = 16\n[encoder]\ndim = 1024\n" + CORPUS)
SPLITS = ["--train", DATA / "train.tsv", "--dev", DATA / "dev.tsv", "--test", DATA / "test.tsv"]


@check("validate accepts generated data")
def _():
    out = stats(run("validate", "--config", DATA / "corpus.cfg", *SPLITS).stdout)
    assert out["train.total"] == "400"
    assert out["train.errors"] == "0"
    assert out["test.violent.unlabeled"] == "150"
    pos, neg = int(out["dev.offensive.positive"]), int(out["dev.offensive.negative"])
    assert pos + neg == 150


@check("validate reports malformed lines with their line numbers")
def _():
    good = (DATA / "train.tsv").read_text().splitlines()[:3]
    bad = WORK / "corrupt.tsv"
    bad.write_text("\n".join([good[0], "x\ty\tOFF", good[1], "z\tw\tMAYBE\tNOT_HS\tNOT_VLG\tNOT_V", good[2]]) + "\n")
    proc = run("validate", "--config", DATA / "corpus.cfg", "--train", bad, expect=2)
    assert f"{bad}:2:" in proc.stderr, proc.stderr
    assert f"{bad}:4:" in proc.stderr and "MAYBE" in proc.stderr, proc.stderr
    assert stats(proc.stdout)["train.errors"] == "2"


@check("validate of an empty file gives zero counts")
def _():
    empty = WORK / "empty.tsv"
    empty.write_text("")
    out = stats(run("validate", "--config", DATA / "corpus.cfg", "--train", empty).stdout)
    assert out["train.total"] == "0" and out["train.offensive.positive"] == "0"


@check("validate flags a mismatch against the OSACT2022 counts")
def _():
    run("validate", "--config", DATA / "corpus.cfg", "--train", DATA / "train.tsv", "--expect", "osact2022", expect=2)


@check("train writes a reproducible report")
def _():
    a, b = WORK / "run_a", WORK / "run_b"
    run("train", "--config", SMALL, *SPLITS, "--out", a, "--quiet")
    run("train", "--config", SMALL, *SPLITS, "--out", b, "--quiet")
    for name in ["report.json", "config.resolved", "model.ckpt", "timing.json"]:
        assert (a / name).exists(), name
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()
    assert (a / "model.ckpt").read_bytes() == (b / "model.ckpt").read_bytes()
    report = json.loads((a / "report.json").read_text())
    assert report["schema"] == "mtal-run-report/1"
    assert len(report["epochs"]) == report["epochs_run"] <= 3
    # 400 samples in batches of 64 -> 7 batches of 10 selections
    assert report["epochs"][0]["selected"] == 70
    assert "wall" not in (a / "report.json").read_text()
    assert "wall_clock_seconds" in json.loads((a / "timing.json").read_text())


@check("the resolved config reproduces the run")
def _():
    a, c = WORK / "run_a", WORK / "run_c"
    run("train", "--config", a / "config.resolved", *SPLITS, "--out", c, "--quiet")
    assert (a / "report.json").read_bytes() == (c / "report.json").read_bytes()


@check("seed override changes the embedded seed")
def _():
    d = WORK / "run_seed"
    run("train", "--config", SMALL, *SPLITS, "--out", d, "--seed-override", 7, "--quiet")
    report = json.loads((d / "report.json").read_text())
    assert "\nseed = 7\n" in report["config"]
    assert report["config_hash"] != json.loads((WORK / "run_a" / "report.json").read_text())["config_hash"]


@check("config errors are all listed and exit 2")
def _():
    bad = WORK / "bad.cfg"
    bad.write_text("schema_version = 1\n[train]\nk_selected = 100\nbogus = 1\n[encoder]\ndim = 1024\n" + CORPUS)
    proc = run("train", "--config", bad, *SPLITS, "--out", WORK / "run_bad", expect=2)
    assert "bogus" in proc.stderr and "exceeds batch_size" in proc.stderr, proc.stderr


@check("missing data file exits 2")
def _():
    run("train", "--config", SMALL, "--train", WORK / "nope.tsv", "--dev", DATA / "dev.tsv",
        "--out", WORK / "run_missing", expect=2)


@check("grid runs 12 cells and writes summaries")
def _():
    grid = WORK / "grid.cfg"
    grid.write_text(
        "schema_version = 1\n[train]\nmax_epochs = 2\nhidden = 8\n[encoder]\ndim = 1024\n"
        "[grid]\nloss_modes = equal, static, dynamic\nuncertainty_modes = none, equal, weighted, dynamic\n" + CORPUS
    )
    out = WORK / "grid"
    run("grid", "--grid", grid, *SPLITS, "--out", out, "--jobs", 2, "--quiet")
    cells = sorted(p.name for p in out.glob("cell-*"))
    assert cells == [f"cell-{i:03d}" for i in range(12)], cells
    rows = (out / "summary.tsv").read_text().splitlines()
    header = rows[0].split("\t")
    assert len(rows) == 13
    for i, line in enumerate(rows[1:]):
        f = dict(zip(header, line.split("\t")))
        assert f["cell"] == str(i) and f["status"] == "ok"
        report = json.loads((out / f"cell-{i:03d}" / "report.json").read_text())
        assert float(f["test_offensive_macro_f1"]) == report["test_macro_f1"]["offensive"]
        assert int(f["cumulative_selected"]) == report["cumulative_selected"]
    assert "| MTL \\ uncertainty |" in (out / "summary.md").read_text()

    # a single cell rerun through `train` gives the same report
    single = WORK / "grid_cell5"
    run("train", "--config", out / "cell-005" / "config.resolved", *SPLITS, "--out", single, "--quiet")
    assert (single / "report.json").read_bytes() == (out / "cell-005" / "report.json").read_bytes()


@check("train refuses a grid config")
def _():
    run("train", "--config", WORK / "grid.cfg", *SPLITS, "--out", WORK / "run_grid", expect=2)


@check("preprocess writes one line per input line")
def _():
    src = WORK / "in.txt"
    src.write_text("@user يا كلب 😡😡 http://x.co\n\nصباح   الخير 🌹\n")
    a, b = WORK / "out_a.txt", WORK / "out_b.txt"
    run("preprocess", "--input", src, "--out", a)
    run("preprocess", "--input", src, "--out", b)
    lines = a.read_text().splitlines()
    assert len(lines) == 3, lines
    assert lines[0] == "يا كلب 😡|2.0 😡|2.0", lines[0]
    assert lines[1] == ""
    assert lines[2] == "صباح الخير 🌹", lines[2]
    assert a.read_bytes() == b.read_bytes()
    c = WORK / "out_strip.txt"
    run("preprocess", "--input", src, "--out", c, "--emoji-mode", "strip")
    assert c.read_text().splitlines()[0] == "يا كلب"


@check("bad usage exits 2")
def _():
    run("grid", "--grid", WORK / "grid.cfg", *SPLITS, "--out", WORK / "g0", "--jobs", 0, expect=2)
    run("frobnicate", expect=2)


print(f"{len(failures)} failed" if failures else "all ok")
sys.exit(1 if failures else 0)
