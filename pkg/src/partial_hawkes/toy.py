"""Gaussian toy models with closed-form estimator variances.

Model 1 mimics counts up to time t: X_i ~ N(Gamma p, Gamma^2 p (1-p)/N + Gamma p / m_t)
i.i.d., and T = N (Gamma p)^-2 (S - Gamma p / m_t) estimates 1/p - 1.

Model 2 mimics per-step increments: a Gaussian array U[i, t] with mean
mu/(1-p), independent across t, exchangeable within a time slice.
C_T = N/(K-1) (mu/(1-p))^-2 (K S_T - mu/(1-p)) estimates p^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, philox

_CHUNK = 1 << 22  # normals per chunk


@dataclass
class Toy1Config:
    N: int
    K: int
    Gamma: float
    p: float
    m_t: float
    replicates: int
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.K <= self.N:
            raise ValueError(f"need 1 <= K <= N, got K={self.K}, N={self.N}")
        if not (self.m_t > 0 and self.Gamma > 0 and 0 < self.p <= 1):
            raise ValueError("need m_t > 0, Gamma > 0 and p in (0, 1]")


@dataclass
class Toy2Config:
    N: int
    K: int
    T: int
    mu: float
    p: float
    replicates: int
    seed: int = 0

    def __post_init__(self):
        if self.K < 2 or self.K > self.N:
            raise ValueError(f"need 2 <= K <= N, got K={self.K}, N={self.N}")
        if not 0 < self.p < 1:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not (self.mu > 0 and self.T >= 1):
            raise ValueError("need mu > 0 and T >= 1")


def _chunks(total: int, per_item: int):
    step = max(1, _CHUNK // per_item)
    for start in range(0, total, step):
        yield start, min(total, start + step)


# -- model 1 -----------------------------------------------------------------

def toy1_variance_of_x(cfg: Toy1Config) -> float:
    gp = cfg.Gamma * cfg.p
    return cfg.Gamma**2 * cfg.p * (1 - cfg.p) / cfg.N + gp / cfg.m_t


def toy1_trial(cfg: Toy1Config):
    """Return arrays (S, T), one entry per replicate."""
    gp = cfg.Gamma * cfg.p
    sd = math.sqrt(toy1_variance_of_x(cfg))
    S = np.empty(cfg.replicates)
    for lo, hi in _chunks(cfg.replicates, cfg.K):
        rng = philox(derive_seed(cfg.seed, 1, lo))
        dev = sd * rng.standard_normal((hi - lo, cfg.K))
        S[lo:hi] = np.mean(dev * dev, axis=1)
    T = cfg.N / gp**2 * (S - gp / cfg.m_t)
    return S, T


def toy1_var_formula(cfg: Toy1Config) -> float:
    gp = cfg.Gamma * cfg.p
    rk = math.sqrt(cfg.K)
    return 2 / gp**4 * (cfg.Gamma**2 * cfg.p * (1 - cfg.p) / rk + cfg.N * gp / (cfg.m_t * rk)) ** 2


# -- model 2 -----------------------------------------------------------------

def toy2_covariances(cfg: Toy2Config) -> tuple[float, float]:
    """(diagonal variance, off-diagonal covariance) within one time slice."""
    mu, p, N = cfg.mu, cfg.p, cfg.N
    diag = p * mu**2 / (N * (1 - p)) + p * mu**2 / (N * (1 - p) ** 2) + mu / (1 - p)
    off = p**2 * mu**2 / (N * (1 - p) ** 2)
    return diag, off


def toy2_sample(cfg: Toy2Config, rng: np.random.Generator, n_rep: int, n_individuals: int):
    """Draw ``n_rep`` arrays of shape (n_individuals, T).

    One shared Gaussian per time slice plus independent noise reproduces the
    exchangeable covariance without factorising an N x N matrix.
    """
    diag, off = toy2_covariances(cfg)
    mean = cfg.mu / (1 - cfg.p)
    common = math.sqrt(off) * rng.standard_normal((n_rep, 1, cfg.T))
    own = math.sqrt(diag - off) * rng.standard_normal((n_rep, n_individuals, cfg.T))
    return mean + common + own


def toy2_trial(cfg: Toy2Config) -> np.ndarray:
    """C_T per replicate."""
    mean = cfg.mu / (1 - cfg.p)
    C = np.empty(cfg.replicates)
    for lo, hi in _chunks(cfg.replicates, cfg.K * cfg.T):
        rng = philox(derive_seed(cfg.seed, 2, lo))
        U = toy2_sample(cfg, rng, hi - lo, cfg.K)
        ubar = U.mean(axis=1)
        S_T = np.mean((ubar - mean) ** 2, axis=1)
        C[lo:hi] = cfg.N / (cfg.K - 1) / mean**2 * (cfg.K * S_T - mean)
    return C


def _rho_alpha(cfg: Toy2Config) -> tuple[float, float]:
    mu, p, N = cfg.mu, cfg.p, cfg.N
    rho = (2 * p - p**2) * mu**2 / (N * (1 - p) ** 2) + mu / (1 - p)
    alpha = p**2 * mu**2 / (1 - p) ** 2
    return rho, alpha


def toy2_var_display(cfg: Toy2Config) -> float:
    """(1/T) (N/(K-1))^2 [rho + (K-1) alpha / N]^2, the stated target without the 2/m^4 factor."""
    rho, alpha = _rho_alpha(cfg)
    return (cfg.N / (cfg.K - 1)) ** 2 * (rho + (cfg.K - 1) * alpha / cfg.N) ** 2 / cfg.T


def toy2_var_exact(cfg: Toy2Config) -> float:
    """Exact Var(C_T): S_T is an average of T scaled chi^2_1 variables."""
    mean = cfg.mu / (1 - cfg.p)
    return 2 / mean**4 * toy2_var_display(cfg)


def toy2_mean_exact(cfg: Toy2Config) -> float:
    """E[C_T] = p^2 + (2p - p^2)/(K - 1)."""
    p = cfg.p
    return p**2 + (2 * p - p**2) / (cfg.K - 1)


def toy2_centering(cfg: Toy2Config) -> float:
    """E[S_T] = Var(bar U_t)."""
    mu, p, N, K = cfg.mu, cfg.p, cfg.N, cfg.K
    return ((2 * p - p**2) * mu**2 / (N * K * (1 - p) ** 2) + mu / (K * (1 - p))
            + p**2 * (K - 1) / (N * K) * mu**2 / (1 - p) ** 2)


def summarize(values: np.ndarray, target_mean: float, formula_var: float) -> dict:
    values = np.asarray(values, dtype=float)
    n = values.size
    mean = float(values.mean())
    var = float(values.var(ddof=1))
    return {
        "replicates": n,
        "mean": mean,
        "std_error": math.sqrt(var / n),
        "target_mean": target_mean,
        "variance": var,
        "formula_variance": formula_var,
        "ratio": var / formula_var,
    }
