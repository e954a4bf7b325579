"""Supercritical estimator of p from counts on (0, t]."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .simulator import EventData


@dataclass
class SupercriticalStats:
    u_stat: float
    p_hat: float
    z_bar: float
    growth_rate: float  # log(z_bar) / t, nan when z_bar == 0
    t: float
    K: int
    N: int

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isnan(d["growth_rate"]):
            d["growth_rate"] = None
        return d


def u_p_from_counts(counts, N: int) -> tuple[float, float]:
    counts = np.asarray(counts, dtype=float)
    K = counts.size
    zbar = counts.mean()
    if zbar <= 0:
        return 0.0, 1.0
    u = N / K * float(np.sum(((counts - zbar) / zbar) ** 2)) - N / zbar
    p = 1.0 / (u + 1.0) if u >= 0 else 0.0
    return u, p


def estimate_supercritical(events: EventData, t: float, K: int) -> SupercriticalStats:
    if not 0 < t <= events.horizon * (1 + 1e-12):
        raise ValueError(f"need 0 < t <= horizon, got t={t}, horizon={events.horizon}")
    if not 1 <= K <= events.N:
        raise ValueError(f"K must lie in [1, {events.N}], got {K}")
    counts = events.counts_at([t], K)[:, 0]
    return supercritical_from_counts(counts, events.N, t)


def supercritical_from_counts(counts, N: int, t: float) -> SupercriticalStats:
    counts = np.asarray(counts)
    u, p = u_p_from_counts(counts, N)
    zbar = float(np.mean(counts))
    growth = math.log(zbar) / t if zbar > 0 else math.nan
    return SupercriticalStats(u, p, zbar, growth, t, int(counts.size), N)
