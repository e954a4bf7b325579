"""Subcritical estimators of (mu, Lambda, p) from the first K individuals.

All statistics read counts on (t, 2t] only; bins inside that window are
left-open/right-closed like :func:`partial_hawkes.simulator.count_in_window`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .simulator import EventData

DEFAULT_Q = 10.0
_GUARD = 1e-12


class EstimatorError(ValueError):
    pass


@dataclass
class SubcriticalStats:
    epsilon: float
    v_stat: float
    x_stat: float
    delta: float
    t: float
    K: int
    N: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class EstimateTriple:
    mu_hat: float
    lambda_hat: float
    p_hat: float
    valid: bool

    def as_tuple(self):
        return (self.mu_hat, self.lambda_hat, self.p_hat)

    def to_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in asdict(self).items()}


INVALID = EstimateTriple(math.nan, math.nan, math.nan, False)


def _check_window(events: EventData, t: float, K: int):
    if not t > 0:
        raise EstimatorError(f"t must be > 0, got {t}")
    if 2 * t > events.horizon * (1 + 1e-12):
        raise EstimatorError(f"need 2t <= horizon, got t={t}, horizon={events.horizon}")
    if not 1 <= K <= events.N:
        raise EstimatorError(f"K must lie in [1, {events.N}], got {K}")


def _n_bins(t: float, delta: float, even: bool = True) -> int:
    """t / delta as an integer. W needs t / (2 delta) integer too, so ``even`` by default."""
    if not delta > 0:
        raise EstimatorError(f"delta must be > 0, got {delta}")
    ratio = t / (2 * delta) if even else t / delta
    m = round(ratio)
    if m < 1 or abs(ratio - m) > 1e-9 * max(1.0, ratio):
        what = "t / (2 delta)" if even else "t / delta"
        raise EstimatorError(f"{what} = {ratio!r} is not a positive integer")
    return 2 * m if even else m


def window_counts(events: EventData, t: float, K: int) -> np.ndarray:
    """Z_i(2t) - Z_i(t) for the first K individuals."""
    _check_window(events, t, K)
    z = events.counts_at([t, 2 * t], K)
    return z[:, 1] - z[:, 0]


def epsilon_from_counts(counts, t: float) -> float:
    counts = np.asarray(counts, dtype=float)
    return float(counts.sum() / (t * counts.size))


def v_from_counts(counts, t: float, N: int) -> float:
    counts = np.asarray(counts, dtype=float)
    K = counts.size
    eps = counts.sum() / (t * K)
    return float(N / K * np.sum((counts / t - eps) ** 2) - N / t * eps)


def epsilon_stat(events: EventData, t: float, K: int) -> float:
    """Mean jump rate of the observed individuals over (t, 2t]."""
    return epsilon_from_counts(window_counts(events, t, K), t)


def v_stat(events: EventData, t: float, K: int) -> float:
    """Bias-corrected cross-sectional variance of the (t, 2t] rates; may be negative."""
    return v_from_counts(window_counts(events, t, K), t, events.N)


def _edges(t: float, n_bins: int) -> np.ndarray:
    # t + k t / n_bins, k = 0..n_bins, with end points exactly t and 2t
    edges = t + t * np.arange(n_bins + 1) / n_bins
    edges[0], edges[-1] = t, 2 * t
    return edges


def _mean_path(events: EventData, t: float, K: int, n_bins: int) -> np.ndarray:
    return events.counts_at(_edges(t, n_bins), K).mean(axis=0)


def _z_from_path(path: np.ndarray, t: float, N: int, stride: int) -> float:
    coarse = path[::stride]
    n = coarse.size - 1
    delta = t / n
    eps = (path[-1] - path[0]) / t
    incr = np.diff(coarse) - delta * eps
    return float(N / t * np.sum(incr * incr))


def z_stat(events: EventData, t: float, K: int, delta: float) -> float:
    """(N/t) sum over bins of (t, 2t] of (bar Z increment - delta * epsilon)^2."""
    _check_window(events, t, K)
    n = _n_bins(t, delta, even=False)
    return _z_from_path(_mean_path(events, t, K, n), t, events.N, 1)


def w_stat(events: EventData, t: float, K: int, delta: float) -> float:
    """2 * z_stat(2 delta) - z_stat(delta)."""
    _check_window(events, t, K)
    n = _n_bins(t, delta)
    path = _mean_path(events, t, K, n)
    return 2 * _z_from_path(path, t, events.N, 2) - _z_from_path(path, t, events.N, 1)


def x_stat(events: EventData, t: float, K: int, delta: float) -> float:
    """w_stat minus the hidden-population correction (N - K)/K * epsilon."""
    w = w_stat(events, t, K, delta)
    eps = epsilon_stat(events, t, K)
    return w - (events.N - K) / K * eps


def default_delta(t: float, q: float = DEFAULT_Q) -> float:
    """Bin width t / (2 floor(t^(1 - 4/(q+1))))."""
    if not q >= 3:
        raise EstimatorError(f"q must be >= 3, got {q}")
    if not t >= 1:
        raise EstimatorError(f"t must be >= 1, got {t}")
    power = t ** (1 - 4 / (q + 1))
    m = math.floor(power)
    if abs(power - round(power)) < 1e-9 * power:
        m = round(power)  # exact integer powers (e.g. 100^0.5) must not round down
    if m < 1:
        raise EstimatorError(f"floor(t^(1-4/(q+1))) = 0 for t={t}, q={q}")
    return t / (2 * m)


def psi(u: float, v: float, w: float) -> EstimateTriple:
    """Invert the limit map (mu, Lambda, p) -> (u, v, w); invalid outside the domain."""
    if not (w > 0 and u >= 0 and v >= 0) or not all(map(math.isfinite, (u, v, w))):
        return INVALID
    if u <= _GUARD:
        return INVALID
    mu = u * math.sqrt(u / w)
    gap = u - mu
    if abs(gap) <= _GUARD * max(1.0, u):
        return INVALID
    lam = (v + gap * gap) / (u * gap)
    if lam == 0 or not math.isfinite(lam):
        return INVALID
    p = (1 - mu / u) / lam
    if not math.isfinite(p):
        return INVALID
    return EstimateTriple(mu, lam, p, True)


def limit_triple(mu: float, Lambda: float, p: float) -> tuple[float, float, float]:
    """Large-(N, K, t) limits of (epsilon, V, X)."""
    d = 1 - Lambda * p
    return mu / d, mu**2 * Lambda**2 * p * (1 - p) / d**2, mu / d**3


def estimate_subcritical(events: EventData, t: float, K: int, q: float = DEFAULT_Q,
                         delta: float | None = None):
    """Compute (epsilon, V, X) at the default bin width and map them through psi."""
    _check_window(events, t, K)
    delta = default_delta(t, q) if delta is None else delta
    n = _n_bins(t, delta)
    z = events.counts_at(_edges(t, n), K)
    N = events.N
    win = z[:, -1] - z[:, 0]
    eps = epsilon_from_counts(win, t)
    v = v_from_counts(win, t, N)
    path = z.mean(axis=0)
    w = 2 * _z_from_path(path, t, N, 2) - _z_from_path(path, t, N, 1)
    x = w - (N - K) / K * eps
    stats = SubcriticalStats(eps, v, x, delta, t, K, N)
    return stats, psi(eps, v, x)
