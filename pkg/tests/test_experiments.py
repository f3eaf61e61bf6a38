import math

import pytest

from oracles import union_of_disks_betti
from topoteach import experiments as ex
from topoteach.homology import filter_barcode
from topoteach.shapes import Circle, derive_rng, sample_uniform


def small_cfg(**kw):
    base = dict(sizes=(100, 250), trials=4, seed=3)
    base.update(kw)
    return ex.ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError):
        ex.ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ex.ExperimentConfig(sizes=(100, 50))
    with pytest.raises(ValueError):
        ex.ExperimentConfig(sizes=(50, 50))
    with pytest.raises(ValueError):
        ex.ExperimentConfig(complex="alpha")
    with pytest.raises(ValueError):
        ex.ExperimentConfig(shape="sphere")


def test_describe_lists_every_field():
    text = small_cfg(shape="circle", shape_params={"radius": 2.0}).describe()
    assert "sizes=100,250" in text and "trials=4" in text and "shape.radius=2.0" in text


def test_sparse_samples_never_feasible():
    rates = ex.feasibility_study(ex.ExperimentConfig(sizes=(25, 50), trials=20, seed=42))
    assert rates == [(25, 0.0), (50, 0.0)]


def test_single_trial_rate_is_binary():
    for size, rate in ex.feasibility_study(ex.ExperimentConfig(sizes=(150, 300), trials=1, seed=9)):
        assert rate in (0.0, 1.0)


def test_rows_independent_of_worker_count():
    cfg = small_cfg()
    assert ex.run_trials(cfg, jobs=1) == ex.run_trials(cfg, jobs=2)


def test_adding_sizes_keeps_existing_rows():
    a = ex.run_trials(small_cfg(sizes=(250,)))
    b = ex.run_trials(small_cfg(sizes=(100, 250)))
    assert a == [r for r in b if r.size == 250]


def test_row_invariants():
    cfg = ex.ExperimentConfig(sizes=(100, 200, 400), trials=6, seed=1)
    rows = ex.run_trials(cfg)
    for r in rows:
        for acc in (r.taught_acc, r.uniform_acc, r.persistent_acc, r.two_loop_fraction):
            assert 0 <= acc <= 1
        assert r.taught_acc == r.feasible
        assert r.taught_acc >= r.uniform_acc and r.taught_acc >= r.persistent_acc
    table = ex.accuracy_study(cfg, rows)
    rates = dict(ex.feasibility_study(cfg, rows))
    assert all(t == rates[s] for s, t, _, _ in table)
    # taught accuracy rises with size, up to one binomial standard deviation
    for (_, a, _, _), (_, b, _, _) in zip(table, table[1:]):
        sd = math.sqrt(max(a * (1 - a), 1 / cfg.trials) / cfg.trials)
        assert b >= a - sd


def test_circle_barcode_study():
    cfg = ex.ExperimentConfig(shape="circle", sizes=(100,), trials=5, seed=0)
    summary = ex.barcode_study(cfg, 100)
    assert summary.h1_counts == [1] * 5
    assert summary.two_loop_fractions == [0.0] * 5
    assert summary.mean_two_loop == 0 and summary.var_two_loop == 0
    # pixel oracle at one radius inside the long bar agrees with the barcode
    pts = sample_uniform(Circle(), 100, derive_rng(0, 100, 0))
    (b, d), = filter_barcode(summary.barcodes[0], 0.05).of_dim(1)
    eps = (b + d) / 2
    assert union_of_disks_betti(pts, eps, eps / 50) == (1, 1)
    with pytest.raises(ValueError):
        ex.barcode_study(cfg, 0)


def test_run_experiment_outputs(tmp_path):
    cfg = small_cfg()
    ex.run_experiment("accuracy", cfg, tmp_path)
    ex.run_experiment("barcode", cfg, tmp_path)
    assert (tmp_path / "feasibility.csv").read_text().splitlines()[0] == "size,trial,feasible"
    assert len((tmp_path / "feasibility.csv").read_text().splitlines()) == 1 + 8
    assert (tmp_path / "accuracy.csv").read_text().splitlines()[0] == "size,taught,uniform,persistent"
    assert (tmp_path / "barcode_stats.csv").read_text().splitlines()[0] == "size,trial,two_loop_fraction,h1_bars"
    assert (tmp_path / "barcode.csv").read_text().startswith("dim,birth,death")
    for svg in ("accuracy.svg", "barcode.svg"):
        assert "<svg" in (tmp_path / svg).read_text()
    assert (tmp_path / "config.resolved.txt").read_text() == cfg.describe()
    with pytest.raises(ValueError):
        ex.run_experiment("nonsense", cfg, tmp_path)


def test_outputs_are_byte_identical(tmp_path):
    cfg = small_cfg()
    for d in ("a", "b"):
        ex.run_experiment("accuracy", cfg, tmp_path / d, jobs=1 if d == "a" else 2)
        ex.run_experiment("barcode", cfg, tmp_path / d)
    for f in ("accuracy.csv", "feasibility.csv", "barcode_stats.csv", "barcode.csv",
              "accuracy.svg", "barcode.svg"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes(), f
