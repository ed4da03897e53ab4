import io
import math

import numpy as np
import pytest

from edisco import conformal as C
from edisco.errors import DomainError, ParseError, ScoreError

GROUPS = np.array([1] * 7 + [2] * 8)


def panel(T, nulls, d=1.0):
    """Single-gene panel whose scores are T and nulls when d = 1."""
    return C.ScorePanel(t=np.atleast_1d(T), null_abs_t=np.atleast_2d(nulls), d=d)


def null_dataset(G, seed=0, groups=GROUPS):
    rng = np.random.default_rng(seed)
    return C.ExpressionDataset(rng.normal(size=(G, groups.size)), [f"g{i}" for i in range(G)], groups)


def test_welch_t_examples():
    assert C.welch_t([0, 2], [3, 5]) == pytest.approx(3 / math.sqrt(2))
    assert C.welch_t([1, 3], [2, 6]) == pytest.approx(2 / math.sqrt(5))
    assert C.welch_t([1, 2, 4], [1, 2, 4]) == 0.0


def test_welch_t_errors():
    with pytest.raises(ScoreError):
        C.welch_t([1, 1], [2, 2])
    with pytest.raises(DomainError):
        C.welch_t([1], [2, 3])


def test_welch_t_antisymmetry():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a, b = rng.normal(size=int(rng.integers(2, 9))), rng.normal(size=int(rng.integers(2, 9)))
        t = C.welch_t(a, b)
        assert C.welch_t(b, a) == pytest.approx(-t)
        assert C.nonconformity_score(C.welch_t(b, a), 10) == pytest.approx(C.nonconformity_score(t, 10))


def test_welch_rows_match_scalar():
    rng = np.random.default_rng(2)
    x = rng.normal(size=15)
    masks = np.array([rng.permutation(GROUPS) == 1 for _ in range(20)])
    t, deg = C._welch_rows(x, masks)
    assert deg == 0
    for row, m in zip(t, masks):
        assert row == pytest.approx(C.welch_t(x[m], x[~m]), rel=1e-12)


def test_score_examples():
    assert C.nonconformity_score(-2, 1) == 2
    assert C.nonconformity_score(2, 10) == 1024
    assert C.nonconformity_score(0, 10) == 0


def test_e_value_examples():
    assert C.conformal_e_values(panel(2, [1, 1, 0]))[0] == pytest.approx(2)
    assert C.conformal_e_values(panel(0, [0, 0, 0]))[0] == 1
    assert C.conformal_e_values(panel(5, [0, 0, 0]))[0] == 4

    assert C.simplified_e_values(panel(2, [1, 1, 0]))[0] == pytest.approx(3)
    assert C.simplified_e_values(panel(0, [1, 2, 0]))[0] == 0
    assert C.simplified_e_values(panel(5, [0, 0, 0]))[0] == math.inf
    assert C.simplified_e_values(panel(0, [0, 0, 0]))[0] == 1


def test_pooled_examples():
    p = panel(2, [1, 1, 0])
    assert C.pooled_conformal_e_values(p)[0] == pytest.approx(C.conformal_e_values(p)[0])
    flat = C.ScorePanel(t=np.full(4, 3.0), null_abs_t=np.full((4, 5), 3.0), d=2.0)
    assert np.allclose(C.pooled_conformal_e_values(flat), 1.0)


def test_p_value_examples():
    # G = 2, B = 2; pooled null |t| = (1, 2, 3, 4)
    p = C.ScorePanel(t=np.array([9.0, 2.0]), null_abs_t=np.array([[1.0, 2.0], [3.0, 4.0]]), d=1.0)
    assert C.conformal_p_values(p).tolist() == pytest.approx([0.2, 0.8])
    assert C.st_p_values(p).tolist() == pytest.approx([0.0, 0.75])
    low = C.ScorePanel(t=np.array([0.5, 0.5]), null_abs_t=np.array([[1.0, 2.0], [3.0, 4.0]]), d=1.0)
    assert C.conformal_p_values(low).tolist() == [1.0, 1.0]
    assert C.st_p_values(low).tolist() == [1.0, 1.0]


def test_degenerate_scores_are_clamped():
    p = panel(math.inf, [math.inf, 1.0, 0.0], d=10.0)
    e = C.conformal_e_values(p)
    assert np.isfinite(e).all() and 0 <= e[0] <= 4
    assert e[0] == pytest.approx(2.0)


def test_overflowing_scores_do_not_break_the_ratio():
    p = panel(1e200, [1e200, 1e200, 1e200], d=2.0)
    assert C.conformal_e_values(p)[0] == pytest.approx(1.0)
    assert C.simplified_e_values(p)[0] == pytest.approx(1.0)


def test_degenerate_gene_in_dataset():
    m = np.zeros((2, 15))
    m[1] = np.random.default_rng(0).normal(size=15)
    data = C.ExpressionDataset(m, ["flat", "noisy"], GROUPS)
    p = C.score_panel(data, C.PermutationConfig(B=20))
    assert p.t[0] == 0 and p.degenerate >= 21
    assert C.conformal_e_values(p)[0] == 1.0


def test_validity_monte_carlo():
    cfg = C.PermutationConfig(B=100, seed=3)
    e = C.conformal_e_values(null_dataset(800, seed=4), cfg)
    assert e.mean() <= 1 + 4 * e.std(ddof=1) / math.sqrt(e.size)


def test_ranges():
    cfg = C.PermutationConfig(B=50, seed=2)
    data = null_dataset(300, seed=5)
    p = C.score_panel(data, cfg)
    e = C.conformal_e_values(p)
    assert ((0 <= e) & (e <= cfg.B + 1)).all()
    pv = C.conformal_p_values(p)
    assert ((pv >= 1 / (data.G * cfg.B + 1)) & (pv <= 1)).all()
    st = C.st_p_values(p)
    assert ((st >= 0) & (st <= 1)).all()


def test_deterministic_across_workers():
    data = null_dataset(40, seed=6)
    cfg = C.PermutationConfig(B=64, seed=11)
    a = C.score_panel(data, cfg, workers=1)
    b = C.score_panel(data, cfg, workers=4)
    assert np.array_equal(a.t, b.t) and np.array_equal(a.null_abs_t, b.null_abs_t)
    assert np.array_equal(C.conformal_e_values(a), C.conformal_e_values(b))


def test_seed_changes_the_draws():
    data = null_dataset(5, seed=6)
    a = C.score_panel(data, C.PermutationConfig(B=30, seed=1))
    b = C.score_panel(data, C.PermutationConfig(B=30, seed=2))
    assert not np.array_equal(a.null_abs_t, b.null_abs_t)


def test_simplified_converges_to_conformal():
    data = null_dataset(30, seed=7)
    gaps = []
    for B in (100, 10_000):
        p = C.score_panel(data, C.PermutationConfig(B=B, seed=1))
        ce, se = C.conformal_e_values(p), C.simplified_e_values(p)
        gaps.append(np.median(np.abs(ce - se) / ce))
    assert gaps[1] < gaps[0] and gaps[1] < 1e-2


def test_panel_config_mismatch():
    p = panel(2, [1, 1, 0])
    with pytest.raises(DomainError):
        C.conformal_e_values(p, C.PermutationConfig(B=5, d=1.0))
    with pytest.raises(DomainError):
        C.conformal_e_values(null_dataset(2))


def test_config_validation():
    with pytest.raises(DomainError):
        C.PermutationConfig(B=0)
    with pytest.raises(DomainError):
        C.PermutationConfig(d=0)
    assert C.PermutationConfig() == C.PermutationConfig(B=10000, seed=1, d=10.0)


# --- loading -------------------------------------------------------------------


def write(tmp_path, text, name="expr.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_loader_filters_and_takes_log2(tmp_path):
    path = write(tmp_path, "gene,a,b,c,d\nG1,8,2,4,1\nG2,25,1,1,1\nG3,16,16,2,2\n")
    data = C.load_expression_dataset(path, "1,1,2,2")
    assert data.gene_ids == ["G1", "G3"] and data.dropped == 1
    assert data.matrix[0].tolist() == [3.0, 1.0, 2.0, 0.0]
    assert (data.n1, data.n2) == (2, 2)


def test_loader_tab_no_header(tmp_path):
    path = write(tmp_path, "G1\t1\t2\t4\t8\nG2\t2\t2\t3\t5\n", "expr.tsv")
    data = C.load_expression_dataset(path, [1, 2, 1, 2])
    assert data.G == 2 and data.matrix[0, 3] == 3.0


def test_threshold_is_inclusive(tmp_path):
    path = write(tmp_path, "G1,20,1,1,1\n")
    assert C.load_expression_dataset(path, "1 1 2 2").G == 1


def test_loader_reports_location_of_bad_value(tmp_path):
    path = write(tmp_path, "gene,a,b,c,d\nG1,1,2,3,4\nG2,1,0,3,4\n")
    with pytest.raises(ParseError) as exc:
        C.load_expression_dataset(path, "1,1,2,2")
    assert exc.value.row == 3 and exc.value.column == 3
    path = write(tmp_path, "G1,1,x,3,4\n")
    with pytest.raises(ParseError):
        C.load_expression_dataset(path, "1,1,2,2")


def test_group_size_errors(tmp_path):
    path = write(tmp_path, "G1,1,2,3,4\n")
    with pytest.raises(DomainError):
        C.load_expression_dataset(path, "1,2,2,2")
    with pytest.raises(DomainError):
        C.load_expression_dataset(path, "1,1,2")
    with pytest.raises(DomainError):
        C.load_expression_dataset(path, "1,1,3,3")


def test_label_file(tmp_path):
    path = write(tmp_path, "1 1 2\n2\n", "labels.txt")
    assert C.read_group_labels(path).tolist() == [1, 1, 2, 2]


def test_gene_table_csv():
    data = null_dataset(3, seed=8)
    table = C.gene_table(data, C.PermutationConfig(B=10))
    assert list(table) == ["gene_id", "t", "T", "e_conformal", "e_simplified", "p_conformal", "p_st"]
    buf = io.StringIO()
    C.write_gene_table(buf, table)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "gene_id,t,T,e_conformal,e_simplified,p_conformal,p_st"
    assert len(lines) == 4 and lines[1].startswith("g0,")
    assert float(lines[1].split(",")[3]) == table["e_conformal"][0]
