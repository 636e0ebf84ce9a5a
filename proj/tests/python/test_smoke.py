import math

import numpy as np
import pytest

import fsum


def test_single_branch_matches_closed_form():
    p = fsum.FadingParams(1.5, 5.0, 1.0)
    assert fsum.f_cdf(p, 1.0) == pytest.approx(0.656958833269618210736, rel=1e-12)
    assert fsum.sum_cdf([p], 1.0) == pytest.approx(fsum.f_cdf(p, 1.0), rel=1e-6)


def test_sum_pdf_frozen_value():
    b = fsum.BranchSet([fsum.FadingParams(2.0, 4.0, 1.0), fsum.FadingParams(1.5, 5.0, 2.0)])
    assert len(b) == 2
    assert fsum.sum_pdf(b, 3.0) == pytest.approx(0.177917020386995272546, rel=1e-6)
    assert fsum.laplace_pdf(b, 3.0) == pytest.approx(0.177917020386995272546, rel=1e-6)


def test_invalid_parameters_raise():
    with pytest.raises(fsum.FsumError):
        fsum.FadingParams(1.0, 0.5, 1.0)


def test_samples_are_sorted_and_seeded():
    b = fsum.BranchSet.iid(fsum.FadingParams(2.0, 4.0, 1.0), 2)
    a = fsum.sample_sum(b, 5000, seed=7)
    c = fsum.sample_sum(b, 5000, seed=7)
    assert isinstance(a, np.ndarray)
    assert a.shape == (5000,)
    assert np.all(np.diff(a) >= 0)
    np.testing.assert_array_equal(a, c)
    assert a.mean() == pytest.approx(2.0, rel=0.1)


def test_metric_methods_agree():
    b = fsum.BranchSet.iid(fsum.FadingParams(2.5, 4.5, 10.0), 2)
    exact = fsum.metric(fsum.Metric.cifr, b, fsum.Method.oracle)
    assert exact.value == pytest.approx(3.869835479124293779, rel=1e-8)
    mc = fsum.metric(fsum.Metric.cifr, b, fsum.Method.monte_carlo, samples=200000, seed=3)
    assert mc.value == pytest.approx(exact.value, rel=0.02)
    assert mc.method == fsum.Method.monte_carlo


def test_outage_is_a_probability():
    b = fsum.BranchSet.iid(fsum.FadingParams(1.5, 5.0, 10.0), 3)
    r = fsum.metric(fsum.Metric.op, b, threshold=1.0)
    assert 0.0 < r.value < 1.0


def test_gamma0_and_awgn():
    b = fsum.BranchSet([fsum.FadingParams(1.5, 5.0, 10.0)])
    g = fsum.solve_gamma0(b, fsum.Method.exact_h)
    assert g["gamma0"] == pytest.approx(0.791973060174357258901, rel=1e-5)
    assert fsum.capacity_awgn(1.0) == pytest.approx(1.0)
    assert fsum.db_to_linear(10.0) == pytest.approx(10.0)
    assert math.isclose(fsum.linear_to_db(100.0), 20.0)


def test_matched_single_f():
    b = fsum.BranchSet.iid(fsum.FadingParams(2.0, 4.0, 1.0), 2)
    q = fsum.match_moments(b, 0.0)
    assert q.mean_snr == pytest.approx(2.0)
    assert q.m > 2.0
    assert fsum.ks_critical(10000, 0.05) == pytest.approx(1.3581 / 100.0, rel=1e-3)
