import math

import numpy as np
import pytest

from partial_hawkes.rng import philox
from partial_hawkes.toy import (
    Toy1Config,
    Toy2Config,
    summarize,
    toy1_trial,
    toy1_var_formula,
    toy2_centering,
    toy2_covariances,
    toy2_mean_exact,
    toy2_sample,
    toy2_trial,
    toy2_var_display,
    toy2_var_exact,
)


def test_toy1_p_one_is_centered_at_zero():
    cfg = Toy1Config(N=200, K=100, Gamma=2.0, p=1.0, m_t=50.0, replicates=20_000, seed=1)
    _, T = toy1_trial(cfg)
    s = summarize(T, 0.0, toy1_var_formula(cfg))
    assert abs(s["mean"]) < 3 * s["std_error"]


def test_toy1_mean_and_variance():
    cfg = Toy1Config(N=400, K=200, Gamma=2.0, p=0.5, m_t=100.0, replicates=40_000, seed=2)
    _, T = toy1_trial(cfg)
    s = summarize(T, 1 / cfg.p - 1, toy1_var_formula(cfg))
    assert abs(s["mean"] - 1.0) < 3 * s["std_error"]
    assert s["ratio"] == pytest.approx(1.0, abs=0.05)


def test_toy1_formula_value():
    # (2/(Gp)^4) (G^2 p(1-p)/sqrt(K) + N G p/(m sqrt(K)))^2 at the acceptance point
    cfg = Toy1Config(N=1000, K=500, Gamma=2, p=0.5, m_t=100, replicates=1)
    inner = 4 * 0.25 / math.sqrt(500) + 1000 * 1 / (100 * math.sqrt(500))
    assert toy1_var_formula(cfg) == pytest.approx(2 * inner**2, rel=1e-14)


def test_toy1_deterministic():
    cfg = Toy1Config(N=50, K=20, Gamma=1.0, p=0.3, m_t=10.0, replicates=100, seed=9)
    np.testing.assert_array_equal(toy1_trial(cfg)[1], toy1_trial(cfg)[1])


def test_config_validation():
    with pytest.raises(ValueError):
        Toy1Config(N=5, K=6, Gamma=1, p=0.5, m_t=1, replicates=1)
    with pytest.raises(ValueError):
        Toy2Config(N=5, K=1, T=3, mu=1, p=0.5, replicates=1)
    with pytest.raises(ValueError):
        Toy2Config(N=5, K=3, T=3, mu=1, p=1.0, replicates=1)


def test_toy2_covariance_brute_force():
    cfg = Toy2Config(N=6, K=6, T=4, mu=1.0, p=0.5, replicates=1)
    U = toy2_sample(cfg, philox(4), 200_000, cfg.N)
    diag, off = toy2_covariances(cfg)
    # covariance across individuals within one slice, and across slices
    C = np.cov(U[:, :, 0].T)
    target = np.full((6, 6), off)
    np.fill_diagonal(target, diag)
    np.testing.assert_allclose(C, target, atol=0.05 * diag)
    across = np.cov(U[:, 0, 0], U[:, 0, 1])[0, 1]
    assert abs(across) < 0.03 * diag
    assert U.mean() == pytest.approx(cfg.mu / (1 - cfg.p), abs=0.01)


def test_toy2_centering_is_var_of_slice_mean():
    cfg = Toy2Config(N=40, K=7, T=3, mu=1.3, p=0.4, replicates=1)
    diag, off = toy2_covariances(cfg)
    K = cfg.K
    assert toy2_centering(cfg) == pytest.approx((diag + (K - 1) * off) / K, rel=1e-13)


def test_toy2_exact_moments():
    cfg = Toy2Config(N=200, K=100, T=50, mu=1.0, p=0.5, replicates=20_000, seed=5)
    C = toy2_trial(cfg)
    s = summarize(C, toy2_mean_exact(cfg), toy2_var_exact(cfg))
    assert abs(s["mean"] - toy2_mean_exact(cfg)) < 3 * s["std_error"]
    assert s["ratio"] == pytest.approx(1.0, abs=0.05)
    # the target expression is 8 times the exact variance here: m^4/2 = 8
    assert toy2_var_display(cfg) / toy2_var_exact(cfg) == pytest.approx(8.0)


def test_toy2_unbiased_for_p_squared_at_large_k():
    cfg = Toy2Config(N=2000, K=1000, T=20, mu=1.0, p=0.5, replicates=4_000, seed=6)
    C = toy2_trial(cfg)
    s = summarize(C, cfg.p**2, toy2_var_exact(cfg))
    assert abs(s["mean"] - cfg.p**2) < 3 * s["std_error"]


def test_toy2_sd_halves_when_t_quadruples():
    base = dict(N=200, K=100, mu=1.0, p=0.5, replicates=10_000)
    sd1 = toy2_trial(Toy2Config(T=25, seed=7, **base)).std(ddof=1)
    sd4 = toy2_trial(Toy2Config(T=100, seed=8, **base)).std(ddof=1)
    assert sd4 / sd1 == pytest.approx(0.5, rel=0.15)
