import subprocess
import sys
import time

import numpy as np
import pytest

from edisco.cli import read_column, run
from edisco.render import read_matrix_csv


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_simulate_contract(work):
    assert run(["simulate", "--K", "20", "--delta", "-3", "--seed", "1", "-o", "obs.csv"]) == 0
    lines = (work / "obs.csv").read_text().splitlines()
    assert len(lines) == 20
    assert [l.split(",")[1] for l in lines] == ["1"] * 10 + ["0"] * 10


def test_simulate_defaults_to_seed_one(work):
    run(["simulate", "--K", "6", "-o", "a.csv"])
    run(["simulate", "--K", "6", "--seed", "1", "-o", "b.csv"])
    assert (work / "a.csv").read_bytes() == (work / "b.csv").read_bytes()


def test_simulate_config_file(work):
    (work / "s.cfg").write_text("K=8\ndelta=-2\nseed=4\n")
    assert run(["simulate", "--config", "s.cfg", "-o", "a.csv"]) == 0
    run(["simulate", "--K", "8", "--delta", "-2", "--seed", "4", "-o", "b.csv"])
    assert (work / "a.csv").read_bytes() == (work / "b.csv").read_bytes()
    # flags override the file
    run(["simulate", "--config", "s.cfg", "--K", "4", "-o", "c.csv"])
    assert len((work / "c.csv").read_text().splitlines()) == 4


def test_matrix_example(work):
    (work / "e.csv").write_text("1\n4\n")
    assert run(["matrix", "--merge", "am", "-i", "e.csv", "-o", "am.csv"]) == 0
    assert (work / "am.csv").read_text() == "2.5\n2.5,1\n"
    for merge in ("generic", "bonferroni", "simes"):
        assert run(["matrix", "--merge", merge, "-i", "e.csv", "-o", f"{merge}.csv"]) == 0
    assert (work / "generic.csv").read_text() == "2.5\n2.5,1\n"


def test_matrix_sorts_and_reports_order(work):
    (work / "e.csv").write_text("evalue\n4\n1\n")
    assert run(["matrix", "-i", "e.csv", "-o", "m.csv", "--order-out", "order.txt"]) == 0
    assert (work / "m.csv").read_text() == "2.5\n2.5,1\n"
    assert (work / "order.txt").read_text() == "1\n2\n"


def test_fdr_example(work, capsys):
    (work / "p.csv").write_text("0.01\n0.02\n0.5\n")
    assert run(["fdr", "-i", "p.csv", "--q", "0.05"]) == 0
    assert capsys.readouterr().out == "BH: 2\nBY: 0\n"
    run(["fdr", "-i", "p.csv", "--q", "0.05", "--q", "0.5"])
    assert "q=0.5 BY:" in capsys.readouterr().out


def test_row_and_vector(work, capsys):
    (work / "e.csv").write_text("6\n1\n2\n")
    assert run(["row", "-i", "e.csv", "--r", "3"]) == 0
    assert capsys.readouterr().out == "3\n1.5\n1\n"
    # input lines 1 and 3 hold e = 6 and 2
    (work / "R.txt").write_text("1,3\n")
    assert run(["vector", "-i", "e.csv", "--rejected", "R.txt"]) == 0
    assert capsys.readouterr().out == "3\n1.5\n"


def test_evalues_kinds(work):
    (work / "x.csv").write_text("-3,1\n0,0\n")
    run(["evalues", "-i", "x.csv", "--delta", "-3", "-o", "lr.csv"])
    assert read_column("lr.csv") == pytest.approx(np.exp([4.5, -4.5]))
    run(["evalues", "-i", "x.csv", "--delta", "-3", "--eta", "1", "-o", "gb.csv"])
    assert (work / "gb.csv").read_text() == (work / "lr.csv").read_text()
    run(["evalues", "-i", "x.csv", "--kind", "p", "-o", "p.csv"])
    assert read_column("p.csv")[1] == 0.5


def test_calibrate(work, capsys):
    (work / "p.csv").write_text("0.01\n1\n")
    assert run(["calibrate", "-i", "p.csv", "--kappa", "0.5"]) == 0
    assert capsys.readouterr().out == "5\n0.5\n"
    run(["calibrate", "-i", "p.csv", "--vs"])
    assert read_column_from(capsys)[1] == 1.0
    (work / "e.csv").write_text("20\n0.5\n")
    run(["calibrate", "-i", "e.csv", "--e-to-p"])
    assert read_column_from(capsys) == pytest.approx([0.05, 1.0])
    assert run(["calibrate", "-i", "p.csv"]) == 1
    assert run(["calibrate", "-i", "p.csv", "--kappa", "2"]) == 1


def read_column_from(capsys):
    return [float(v) for v in capsys.readouterr().out.split()]


def test_render_scales(work):
    (work / "m.csv").write_text("5\n")
    assert run(["render", "-i", "m.csv", "-o", "m.ppm"]) == 0
    assert (work / "m.ppm").read_bytes() == b"P6\n1 1\n255\n\xff\xff\x00"
    (work / "e.csv").write_text("1\n4\n")
    run(["matrix", "-i", "e.csv", "-o", "am.csv"])
    run(["render", "-i", "am.csv", "--scale", "fisher", "--transform", "e-to-p", "--crop", "1,1", "-o", "p.ppm"])
    assert (work / "p.ppm").read_bytes() == b"P6\n1 1\n255\n\x00\xc8\x00"
    assert run(["render", "-i", "am.csv", "--crop", "3,3", "-o", "bad.ppm"]) == 1


def test_conformal_pipeline(work, capsys):
    rng = np.random.default_rng(0)
    raw = 2 ** rng.uniform(0, 4, size=(12, 6))
    raw[0, 0] = 30.0
    raw[1, :3] *= 0.1
    lines = ["gene,s1,s2,s3,s4,s5,s6"] + [f"G{i}," + ",".join(f"{v:.6f}" for v in row) for i, row in enumerate(raw)]
    (work / "expr.csv").write_text("\n".join(lines) + "\n")
    args = ["conformal", "-i", "expr.csv", "--labels", "1,1,1,2,2,2", "--B", "50", "-o", "genes.csv"]
    assert run(args + ["--matrix-out", "m.csv", "--ppm-out", "m.ppm", "--crop", "5,5"]) == 0
    assert "11 retained, 1 dropped" in capsys.readouterr().err
    table = (work / "genes.csv").read_text().splitlines()
    assert table[0] == "gene_id,t,T,e_conformal,e_simplified,p_conformal,p_st"
    assert len(table) == 12 and table[1].startswith("G1,")
    assert read_matrix_csv((work / "m.csv").read_text()).K == 11
    assert (work / "m.ppm").read_bytes().startswith(b"P6\n5 5\n255\n")
    first = (work / "genes.csv").read_bytes()
    (work / "labels.txt").write_text("1 1 1 2 2 2\n")
    run(["conformal", "-i", "expr.csv", "--labels-file", "labels.txt", "--B", "50", "-o", "again.csv"])
    assert (work / "again.csv").read_bytes() == first


def test_conformal_ppm_without_full_matrix(work):
    rows = [f"G{i}," + ",".join(str(v) for v in np.arange(1, 7) + i) for i in range(8)]
    (work / "expr.csv").write_text("\n".join(rows) + "\n")
    args = ["conformal", "-i", "expr.csv", "--labels", "1,1,1,2,2,2", "--B", "20", "-o", "g.csv"]
    assert run(args + ["--ppm-out", "m.ppm", "--crop", "3,2"]) == 0
    assert (work / "m.ppm").read_bytes().startswith(b"P6\n2 3\n255\n")


def test_exit_codes(work, capsys):
    assert run(["fdr", "-i", "missing.csv"]) == 2
    assert run(["frobnicate"]) == 1
    assert run(["fdr", "-i", "p.csv", "--bogus"]) == 1
    (work / "bad.csv").write_text("0.1\nabc\n")
    assert run(["fdr", "-i", "bad.csv"]) == 1
    (work / "p.csv").write_text("0.1\n")
    assert run(["fdr", "-i", "p.csv", "--q", "2"]) == 1
    assert run(["simulate", "-o", "x.csv"]) == 1
    err = capsys.readouterr().err
    assert all(line.startswith("edisco: ") for line in err.strip().splitlines())
    assert not (work / "x.csv").exists()


def test_pipeline_is_fast_and_deterministic(work):
    t0 = time.perf_counter()
    for tag in ("a", "b"):
        assert run(["simulate", "--K", "200", "-o", f"obs_{tag}.csv"]) == 0
        assert run(["evalues", "-i", f"obs_{tag}.csv", "-o", f"e_{tag}.csv"]) == 0
        assert run(["matrix", "-i", f"e_{tag}.csv", "-o", f"m_{tag}.csv"]) == 0
        assert run(["render", "-i", f"m_{tag}.csv", "-o", f"m_{tag}.ppm"]) == 0
    assert time.perf_counter() - t0 < 5.0
    img = (work / "m_a.ppm").read_bytes()
    assert img.startswith(b"P6\n200 200\n255\n") and len(img) == len(b"P6\n200 200\n255\n") + 3 * 200 * 200
    for name in ("obs", "e", "m"):
        assert (work / f"{name}_a.csv").read_bytes() == (work / f"{name}_b.csv").read_bytes()
    assert img == (work / "m_b.ppm").read_bytes()


def test_output_ignores_thread_count(work, monkeypatch):
    rows = [f"G{i}," + ",".join(str(v) for v in np.arange(1, 7) * (1 + i % 3) + i) for i in range(10)]
    (work / "expr.csv").write_text("\n".join(rows) + "\n")
    args = ["conformal", "-i", "expr.csv", "--labels", "1,2,1,2,1,2", "--B", "30"]
    monkeypatch.setenv("EDISCO_THREADS", "1")
    run(args + ["-o", "one.csv"])
    monkeypatch.setenv("EDISCO_THREADS", "4")
    run(args + ["-o", "four.csv"])
    assert (work / "one.csv").read_bytes() == (work / "four.csv").read_bytes()


def test_module_entry_point(work):
    (work / "p.csv").write_text("0.01\n0.02\n0.5\n")
    out = subprocess.run([sys.executable, "-m", "edisco", "fdr", "-i", "p.csv"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "BH: 2\nBY: 0\n"
