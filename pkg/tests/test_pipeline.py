import math

import numpy as np
import pytest

from arithrec.pipeline import (
    DESK_MATRIX,
    MatrixSource,
    ReconcileTrialConfig,
    frame_seed,
    run_mi_preservation,
    run_reconciliation_experiment,
    run_reconciliation_point,
    run_reconciliation_trial,
)


@pytest.fixture(scope="module")
def toy_source(toy_alist_path):
    return MatrixSource(alist=toy_alist_path)


def test_matrix_source_validation():
    with pytest.raises(ValueError):
        MatrixSource()
    with pytest.raises(ValueError):
        MatrixSource(alist="x", n=10, dv=3, dc=4)
    with pytest.raises(ValueError):
        MatrixSource(n=10)
    assert MatrixSource.regular(40, 3, 4, 1).describe() == {"n": 40, "dv": 3, "dc": 4, "seed": 1}


def test_trial_config_validation():
    for kwargs in ({"n_frames": 0}, {"level": 0}, {"max_iterations": 0}, {"llr_mode": "x"}):
        with pytest.raises(ValueError):
            ReconcileTrialConfig(3.0, **kwargs)


def test_frame_seed_is_pure():
    assert frame_seed(0, 3) == frame_seed(0, 3)
    assert len({frame_seed(0, i) for i in range(100)}) == 100
    assert frame_seed(1, 0) != frame_seed(0, 0)


@pytest.mark.parametrize("mode", ["soft_x", "hard_bsc"])
def test_toy_code_near_noiseless(toy_source, mode):
    cfg = ReconcileTrialConfig(30.0, matrix_source=toy_source, llr_mode=mode)
    for i in range(20):
        t = run_reconciliation_trial(cfg, i)
        assert t.outcome.syndrome_matched and t.sequence_matched
        assert t.outcome.bit_errors_vs_reference == 0


@pytest.mark.slow
def test_desk_code_high_snr_matches():
    report, trials = run_reconciliation_point(ReconcileTrialConfig(7.0, n_frames=5))
    assert report.syndrome_match_rate == 1.0 and report.sequence_match_rate == 1.0
    assert report.residual_ber == 0.0 and report.matched_syndrome_wrong_sequence == 0


@pytest.mark.slow
def test_desk_code_zero_db_fails():
    report, _ = run_reconciliation_point(ReconcileTrialConfig(0.0, n_frames=3))
    assert report.syndrome_match_rate == 0.0
    assert report.mean_iterations == 50
    assert report.iteration_histogram[50] == 3
    assert report.residual_ber > 0


def test_thread_count_does_not_change_results():
    src = MatrixSource.regular(400, 3, 4, seed=2)
    cfg = ReconcileTrialConfig(3.0, n_frames=6, matrix_source=src, base_seed=5)
    r1, t1 = run_reconciliation_point(cfg, threads=1)
    r4, t4 = run_reconciliation_point(cfg, threads=4)
    assert r1 == r4
    for a, b in zip(t1, t4):
        assert np.array_equal(a.outcome.word, b.outcome.word)
        assert a.outcome.iterations == b.outcome.iterations


def test_experiment_rows_and_histogram():
    src = MatrixSource.regular(400, 3, 4, seed=2)
    reports = run_reconciliation_experiment([1.0, 8.0], n_frames=4, matrix_source=src,
                                            max_iterations=20)
    assert [r.snr_db for r in reports] == [1.0, 8.0]
    for r in reports:
        assert len(r.iteration_histogram) == 21 and sum(r.iteration_histogram) == 4
        assert 0.0 <= r.channel_ber <= 0.5
        assert "regular(n=400" in r.code
    assert reports[1].channel_ber < reports[0].channel_ber
    with pytest.raises(ValueError):
        run_reconciliation_experiment([], matrix_source=src)


def test_residual_ber_reported_on_failed_frames():
    src = MatrixSource.regular(400, 3, 4, seed=2)
    report, trials = run_reconciliation_point(
        ReconcileTrialConfig(-5.0, n_frames=2, matrix_source=src, max_iterations=5))
    assert report.syndrome_match_rate == 0.0
    assert all(t.outcome.bit_errors_vs_reference > 0 for t in trials)
    assert report.residual_ber > 0


def test_mi_preservation_unit_snr():
    (row,) = run_mi_preservation([0.0], n=5000, seeds=range(4))
    assert row.i_xy_analytic == pytest.approx(0.5, abs=1e-15)
    assert row.i_uv_ksg == pytest.approx(0.5, abs=0.05)
    assert abs(row.i_uv_ksg - row.i_xy_ksg) < 0.02
    assert row.i_uv_ksg_stderr > 0
    assert list(row.csv_row())[:4] == ["snr_db", "I_XY_analytic", "I_UV_ksg", "stderr"]


def test_mi_preservation_low_snr():
    (row,) = run_mi_preservation([-14.0], n=5000, seeds=range(4))
    assert row.i_xy_analytic == pytest.approx(0.5 * math.log2(1 + 10 ** -1.4), rel=1e-14)
    assert row.i_xy_analytic == pytest.approx(0.0282, abs=1e-4)
    assert abs(row.i_uv_ksg - row.i_xy_analytic) <= 0.03


def test_mi_preservation_argument_checks():
    with pytest.raises(ValueError):
        run_mi_preservation([0.0], n=3, k=3)
    with pytest.raises(ValueError):
        run_mi_preservation([], n=100)


def test_mi_preservation_thread_independent():
    a = run_mi_preservation([-4.0, 0.0], n=800, seeds=range(3), threads=1)
    b = run_mi_preservation([-4.0, 0.0], n=800, seeds=range(3), threads=3)
    assert [r.csv_row() for r in a] == [r.csv_row() for r in b]
