"""Exact event-driven simulation of the N-dimensional Hawkes system.

    lambda_i(t) = mu + (1/N) sum_j theta_ij int_[0,t) phi(t - s) dZ_j(s)

All N individuals are simulated; restricting to the observed first K is the
estimators' business.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._accel import loops
from .graph import Graph
from .kernels import BoxKernel, ExponentialKernel, Kernel, KernelError
from .rng import philox

DEFAULT_MAX_EVENTS = 10**7
_UNIF_CHUNK = 1 << 16
_INITIAL_CAP = 1 << 14


class SimulationOverflow(RuntimeError):
    """More than ``max_events`` events were accepted."""

    def __init__(self, count, max_events, t):
        self.count = count
        self.max_events = max_events
        self.t = t
        super().__init__(
            f"simulation exceeded max_events={max_events}: "
            f"{count} events accepted by time {t:.6g}"
        )


class SimulationError(RuntimeError):
    pass


@dataclass(eq=False)
class SimConfig:
    graph: Graph
    mu: float
    kernel: Kernel
    horizon: float
    seed: int
    max_events: int = DEFAULT_MAX_EVENTS

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if not self.max_events > 0:
            raise ValueError(f"max_events must be > 0, got {self.max_events}")
        if not isinstance(self.kernel, (ExponentialKernel, BoxKernel)):
            raise KernelError(f"unsupported kernel {self.kernel!r}")

    @property
    def N(self) -> int:
        return self.graph.N

    def to_dict(self) -> dict:
        return {
            "N": self.graph.N,
            "p": self.graph.p,
            "graph_seed": self.graph.seed,
            "mu": self.mu,
            "kernel": self.kernel.to_dict(),
            "horizon": self.horizon,
            "seed": self.seed,
            "max_events": self.max_events,
        }


@dataclass(eq=False)
class EventData:
    """Event history of all N individuals on (0, horizon].

    ``times``/``ids`` hold the global causal order. ``offsets`` index the
    per-individual sorted arrays packed in ``by_individual``.
    """

    N: int
    horizon: float
    times: np.ndarray
    ids: np.ndarray
    seed: int | None = None
    intensity_trace: np.ndarray | None = None
    offsets: np.ndarray = field(init=False, repr=False)
    by_individual: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.float64)
        self.ids = np.asarray(self.ids, dtype=np.int64)
        if self.times.shape != self.ids.shape:
            raise ValueError("times and ids must have the same length")
        if self.ids.size and (self.ids.min() < 0 or self.ids.max() >= self.N):
            raise ValueError("individual index out of range")
        order = np.lexsort((self.times, self.ids))
        self.by_individual = self.times[order]
        counts = np.bincount(self.ids, minlength=self.N)
        self.offsets = np.concatenate(([0], np.cumsum(counts)))
        for i in range(self.N):
            ev = self.events(i)
            if ev.size and (ev[0] <= 0 or ev[-1] > self.horizon or np.any(np.diff(ev) <= 0)):
                raise ValueError(f"timestamps of individual {i} must be strictly increasing in (0, horizon]")

    @classmethod
    def from_lists(cls, lists, horizon, seed=None) -> "EventData":
        times = np.concatenate([np.asarray(x, dtype=float) for x in lists]) if lists else np.zeros(0)
        ids = np.concatenate([np.full(len(x), i, dtype=np.int64) for i, x in enumerate(lists)]) if lists else np.zeros(0, np.int64)
        order = np.argsort(times, kind="stable")
        return cls(len(lists), horizon, times[order], ids[order], seed)

    @property
    def total_events(self) -> int:
        return int(self.times.size)

    def events(self, i: int) -> np.ndarray:
        return self.by_individual[self.offsets[i]:self.offsets[i + 1]]

    def counts(self) -> np.ndarray:
        return np.diff(self.offsets)

    def counts_at(self, edges, K: int | None = None) -> np.ndarray:
        """Z_i(edge) = #{s <= edge} for i < K, shape (K, len(edges))."""
        K = self.N if K is None else K
        edges = np.asarray(edges, dtype=float)
        out = np.empty((K, edges.size), dtype=np.int64)
        for i in range(K):
            out[i] = np.searchsorted(self.events(i), edges, side="right")
        return out


def simulate(config: SimConfig, trace: bool = False) -> EventData:
    """Ogata thinning with a global, re-tightened bound.

    Between accepted events every intensity is non-increasing, so the total
    intensity at the current time bounds it until the next candidate. With
    ``trace=True`` the full intensity vector (left limit) is stored at every
    accepted event.
    """
    g = config.graph
    N = g.N
    kern = config.kernel
    rng = philox(config.seed)
    max_events = int(config.max_events)

    cap = min(_INITIAL_CAP, max_events + 1)
    out_t = np.empty(cap)
    out_i = np.empty(cap, dtype=np.int64)
    tr = np.empty((cap if trace else 0, N))
    n_out = 0
    state = np.zeros(1)

    if isinstance(kern, ExponentialKernel):
        theta_t = np.ascontiguousarray(g.theta.T, dtype=np.float64)
        S = np.zeros(N)
        jump = kern.a / N

        def step(unif, out_t, out_i, n_out, tr):
            return loops.exp_thinning(theta_t, float(config.mu), jump, kern.b, float(config.horizon),
                                      state, S, unif, out_t, out_i, n_out, tr, trace)
    else:
        theta_t = np.ascontiguousarray(g.theta.T, dtype=np.uint8)
        cnt = np.zeros(N, dtype=np.int64)
        head = np.zeros(1, dtype=np.int64)
        height = kern.c / N

        def step(unif, out_t, out_i, n_out, tr):
            return loops.box_thinning(theta_t, float(config.mu), height, kern.w, float(config.horizon),
                                      state, cnt, head, unif, out_t, out_i, n_out, tr, trace)

    unif = rng.random((_UNIF_CHUNK, 2))
    pos = 0
    while True:
        n_out, used, status = step(unif[pos:], out_t, out_i, n_out, tr)
        pos += used
        if status == 0:
            break
        if status == 1:
            unif = rng.random((_UNIF_CHUNK, 2))
            pos = 0
        elif status == 2:
            if n_out > max_events:
                raise SimulationOverflow(n_out, max_events, float(out_t[n_out - 1]))
            new_cap = min(2 * cap, max_events + 1)
            out_t = _grow(out_t, new_cap)
            out_i = _grow(out_i, new_cap)
            if trace:
                tr = _grow(tr, new_cap)
            cap = new_cap
        elif status == 3:
            raise SimulationError(
                f"two events collided at t={out_t[n_out - 1]!r} (seed {config.seed}); "
                "refusing to reorder"
            )
    if n_out > max_events:
        raise SimulationOverflow(n_out, max_events, float(out_t[n_out - 1]))

    return EventData(
        N, float(config.horizon), out_t[:n_out].copy(), out_i[:n_out].copy(), config.seed,
        tr[:n_out].copy() if trace else None,
    )


def _grow(arr, new_cap):
    out = np.empty((new_cap,) + arr.shape[1:], dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


def count_in_window(events: EventData, individual: int, from_exclusive: float,
                    to_inclusive: float) -> int:
    """Number of jumps of ``individual`` in (from_exclusive, to_inclusive]."""
    if not 0 <= from_exclusive <= to_inclusive <= events.horizon:
        raise ValueError(
            f"window ({from_exclusive}, {to_inclusive}] not inside [0, {events.horizon}]"
        )
    ev = events.events(individual)
    return int(np.searchsorted(ev, to_inclusive, side="right")
               - np.searchsorted(ev, from_exclusive, side="right"))


def intensity_probe(events: EventData, config: SimConfig, individual: int, t: float) -> float:
    """lambda_i(t) by direct summation over every recorded event strictly before t."""
    if t > events.horizon:
        raise ValueError(f"t={t} beyond horizon {events.horizon}")
    mask = events.times < t
    src = events.ids[mask]
    lags = t - events.times[mask]
    weights = config.graph.theta[individual, src]
    if not weights.any():
        return float(config.mu)
    phi = np.asarray(config.kernel.evaluate(lags[weights]), dtype=float)
    return float(config.mu + phi.sum() / events.N)


def compensator_at(events: EventData, config: SimConfig, individual: int, times) -> np.ndarray:
    """Integrated intensity Lambda_i evaluated at sorted query ``times`` (closed form)."""
    times = np.asarray(times, dtype=float)
    N = events.N
    wts_all = config.graph.theta[individual, events.ids].astype(float)
    src_t = events.times[wts_all > 0]
    kern = config.kernel
    base = config.mu * times
    if src_t.size == 0:
        return base
    if isinstance(kern, ExponentialKernel):
        # merge queries into the source stream; queries carry zero weight
        all_t = np.concatenate((src_t, times))
        all_w = np.concatenate((np.ones(src_t.size), np.zeros(times.size)))
        is_q = np.concatenate((np.zeros(src_t.size, bool), np.ones(times.size, bool)))
        # sources at the same instant as a query sit after it: only s < t counts
        order = np.lexsort((~is_q, all_t))
        G, C = loops.exp_decayed_sums(all_t[order], all_w[order], kern.b)
        q_pos = np.flatnonzero(is_q[order])
        G, C = G[q_pos], C[q_pos]
        return base + kern.a / (N * kern.b) * (C - G)
    # box: each source contributes c * min(t - s, w) for s < t
    csum = np.concatenate(([0.0], np.cumsum(src_t)))
    lo = np.searchsorted(src_t, times - kern.w, side="right")
    hi = np.searchsorted(src_t, times, side="left")
    n_old = lo
    n_recent = hi - lo
    recent = n_recent * times - (csum[hi] - csum[lo])
    return base + kern.c / N * (kern.w * n_old + recent)


def rescaling_residuals(events: EventData, config: SimConfig, individual: int) -> np.ndarray:
    """Compensator increments between consecutive jumps; i.i.d. Exp(1) under the model."""
    ev = events.events(individual)
    if ev.size < 2:
        return np.zeros(0)
    return np.diff(compensator_at(events, config, individual, ev))
