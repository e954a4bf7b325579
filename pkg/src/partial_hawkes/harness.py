"""Monte-Carlo sweeps, JSON-lines persistence and empirical rate fits."""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .graph import sample_graph
from .kernels import Kernel, kernel_from_dict, solve_alpha0
from .rng import derive_seed
from .simulator import DEFAULT_MAX_EVENTS, SimConfig, SimulationOverflow, simulate
from .subcritical import DEFAULT_Q, estimate_subcritical
from .supercritical import estimate_supercritical

REGIMES = ("subcritical", "supercritical")


class ConfigError(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass
class RunConfig:
    regime: str
    mu: float
    kernel: Kernel
    p: float
    N: list
    t: list
    K: list | None = None  # None: K = N at every grid point
    q: float = DEFAULT_Q
    replicates: int = 10
    base_seed: int = 0
    out: str | None = None
    max_events: int = DEFAULT_MAX_EVENTS

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise ConfigError(f"regime must be one of {REGIMES}, got {self.regime!r}")
        lp = self.kernel.total_mass() * self.p
        if self.regime == "subcritical" and not lp < 1:
            raise ConfigError(f"subcritical regime requested but Lambda * p = {lp:.6g} >= 1")
        if self.regime == "supercritical" and not lp > 1:
            raise ConfigError(f"supercritical regime requested but Lambda * p = {lp:.6g} <= 1")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        kern = d.pop("kernel")
        d["kernel"] = kern if isinstance(kern, Kernel) else kernel_from_dict(kern)
        for key in ("N", "t", "K"):
            if key in d and d[key] is not None and not isinstance(d[key], (list, tuple)):
                d[key] = [d[key]]
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path) as fh:
            if str(path).endswith((".yaml", ".yml")):
                import yaml

                return cls.from_dict(yaml.safe_load(fh))
            return cls.from_dict(json.load(fh))

    @property
    def Lambda(self) -> float:
        return self.kernel.total_mass()

    def grid(self) -> list[tuple[int, int, float]]:
        pts = []
        for N, t in itertools.product(self.N, self.t):
            for K in (self.K if self.K is not None else [N]):
                if K <= N:
                    pts.append((int(N), int(K), float(t)))
        return pts

    def horizon(self, t: float) -> float:
        return 2 * t if self.regime == "subcritical" else t


@dataclass
class TrialRecord:
    regime: str
    grid_index: int
    replicate: int
    N: int
    K: int
    t: float
    mu: float
    Lambda: float
    p: float
    q: float
    kernel: dict
    graph_seed: int
    sim_seed: int
    status: str = "ok"  # ok | invalid | overflow
    event_count: int | None = None
    epsilon: float | None = None
    v_stat: float | None = None
    x_stat: float | None = None
    delta: float | None = None
    u_stat: float | None = None
    z_bar: float | None = None
    growth_rate: float | None = None
    mu_hat: float | None = None
    lambda_hat: float | None = None
    p_hat: float | None = None
    valid: bool = False
    err_mu: float | None = None
    err_lambda: float | None = None
    err_p: float | None = None
    wall_time: float = 0.0
    message: str = ""

    @property
    def key(self) -> tuple[int, int]:
        return (self.grid_index, self.replicate)

    def to_json(self) -> str:
        return json.dumps({k: _clean(v) for k, v in asdict(self).items()}, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TrialRecord":
        return cls(**d)


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, np.generic):
        return v.item()
    return v


def run_trial(config: RunConfig, grid_index: int, replicate: int) -> TrialRecord:
    N, K, t = config.grid()[grid_index]
    graph_seed = derive_seed(config.base_seed, grid_index, replicate, 1)
    sim_seed = derive_seed(config.base_seed, grid_index, replicate, 2)
    rec = TrialRecord(config.regime, grid_index, replicate, N, K, t, config.mu, config.Lambda,
                      config.p, config.q, config.kernel.to_dict(), graph_seed, sim_seed)
    start = time.perf_counter()
    graph = sample_graph(N, config.p, graph_seed)
    sim = SimConfig(graph, config.mu, config.kernel, config.horizon(t), sim_seed, config.max_events)
    try:
        events = simulate(sim)
    except SimulationOverflow as exc:
        rec.status = "overflow"
        rec.event_count = exc.count
        rec.message = str(exc)
        rec.wall_time = time.perf_counter() - start
        return rec
    rec.event_count = events.total_events
    if config.regime == "subcritical":
        stats, est = estimate_subcritical(events, t, K, config.q)
        rec.epsilon, rec.v_stat, rec.x_stat, rec.delta = stats.epsilon, stats.v_stat, stats.x_stat, stats.delta
        rec.valid = est.valid
        if est.valid:
            rec.mu_hat, rec.lambda_hat, rec.p_hat = est.mu_hat, est.lambda_hat, est.p_hat
            rec.err_mu = abs(est.mu_hat - config.mu)
            rec.err_lambda = abs(est.lambda_hat - config.Lambda)
            rec.err_p = abs(est.p_hat - config.p)
    else:
        st = estimate_supercritical(events, t, K)
        rec.u_stat, rec.z_bar, rec.growth_rate = st.u_stat, st.z_bar, _clean(st.growth_rate)
        rec.p_hat = st.p_hat
        # the indicator form always yields a p in [0, 1]; only an empty sample is degenerate
        rec.valid = st.z_bar > 0
        if rec.valid:
            rec.err_p = abs(st.p_hat - config.p)
    if not rec.valid:
        rec.status = "invalid"
    rec.wall_time = time.perf_counter() - start
    return rec


def _trial_task(args):
    config, gi, rep = args
    return run_trial(config, gi, rep)


def read_records(path) -> list[TrialRecord]:
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(TrialRecord.from_dict(json.loads(line)))
    return out


def run_sweep(config: RunConfig, workers: int = 1, out: str | None = None, resume: bool = True):
    """Yield one TrialRecord per (grid point, replicate) in grid order.

    With an output path, records are appended as JSON lines and trials already
    present in the file are skipped (and not yielded again).
    """
    out = out if out is not None else config.out
    done = set()
    if out is not None:
        directory = os.path.dirname(os.path.abspath(out))
        if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
            raise OSError(f"output path {out!r} is not writable")
        if resume and os.path.exists(out):
            done = {r.key for r in read_records(out)}
    tasks = [(config, gi, rep)
             for gi in range(len(config.grid()))
             for rep in range(config.replicates)
             if (gi, rep) not in done]
    sink = open(out, "a") if out is not None else None
    try:
        if workers <= 1:
            results = map(_trial_task, tasks)
            for rec in results:
                _emit(sink, rec)
                yield rec
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for rec in pool.map(_trial_task, tasks, chunksize=1):
                    _emit(sink, rec)
                    yield rec
    finally:
        if sink is not None:
            sink.close()


def _emit(sink, rec):
    if sink is not None:
        sink.write(rec.to_json() + "\n")
        sink.flush()


def predicted_rate(regime: str, N: int, K: int, t: float, q: float = DEFAULT_Q,
                   alpha0: float | None = None) -> float:
    if regime == "subcritical":
        return (1 / math.sqrt(K) + N / (K * t ** ((1 - 4 / (q + 1)) / 2))
                + N / (t * math.sqrt(K)))
    if alpha0 is None:
        raise ValueError("supercritical rate needs alpha0")
    return N / (math.sqrt(K) * math.exp(alpha0 * t)) + 1 / math.sqrt(K)


def _alpha0(rec: TrialRecord) -> float | None:
    if rec.regime != "supercritical":
        return None
    return solve_alpha0(kernel_from_dict(rec.kernel), rec.p)


@dataclass
class GridSummary:
    grid_index: int
    N: int
    K: int
    t: float
    n_trials: int
    n_valid: int
    invalid_fraction: float
    predicted_rate: float
    mean: dict = field(default_factory=dict)
    rmse: dict = field(default_factory=dict)


_PARAMS = {"mu": ("mu_hat", "mu"), "lambda": ("lambda_hat", "Lambda"), "p": ("p_hat", "p")}


def summarize_grid(records: list[TrialRecord]) -> list[GridSummary]:
    groups: dict[int, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault(r.grid_index, []).append(r)
    out = []
    for gi in sorted(groups):
        recs = groups[gi]
        first = recs[0]
        valid = [r for r in recs if r.valid]
        params = ("p",) if first.regime == "supercritical" else ("mu", "lambda", "p")
        mean, rmse = {}, {}
        for name in params:
            est_key, true_key = _PARAMS[name]
            vals = np.array([getattr(r, est_key) for r in valid], dtype=float)
            truth = getattr(first, true_key)
            mean[name] = float(vals.mean()) if vals.size else math.nan
            rmse[name] = float(np.sqrt(np.mean((vals - truth) ** 2))) if vals.size else math.nan
        rate = predicted_rate(first.regime, first.N, first.K, first.t, first.q, _alpha0(first))
        out.append(GridSummary(gi, first.N, first.K, first.t, len(recs), len(valid),
                               1 - len(valid) / len(recs), rate, mean, rmse))
    return out


@dataclass
class RateFit:
    regime: str
    slopes: dict
    intercepts: dict
    r_squared: dict
    n_points: int
    n_valid: int
    n_invalid: int


def fit_rates(records: list[TrialRecord], min_points: int = 3, min_valid: int = 5) -> RateFit:
    """Least-squares fit of log RMSE against log predicted rate, per parameter."""
    if not records:
        raise InsufficientData("no records")
    summaries = [s for s in summarize_grid(records) if s.n_valid >= min_valid]
    if len(summaries) < min_points:
        raise InsufficientData(
            f"need >= {min_points} grid points with >= {min_valid} valid trials, got {len(summaries)}"
        )
    x = np.log([s.predicted_rate for s in summaries])
    slopes, intercepts, r2 = {}, {}, {}
    for name in summaries[0].rmse:
        y = np.log([s.rmse[name] for s in summaries])
        slope, intercept = np.polyfit(x, y, 1)
        resid = y - (slope * x + intercept)
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        slopes[name] = float(slope)
        intercepts[name] = float(intercept)
        r2[name] = 1 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    n_valid = sum(1 for r in records if r.valid)
    return RateFit(records[0].regime, slopes, intercepts, r2, len(summaries), n_valid,
                   len(records) - n_valid)


def write_report(records: list[TrialRecord], path) -> list[dict]:
    """Aggregate records into a per-grid-point CSV table."""
    rows = []
    for s in summarize_grid(records):
        row = {"grid_index": s.grid_index, "N": s.N, "K": s.K, "t": s.t,
               "n_trials": s.n_trials, "n_valid": s.n_valid,
               "invalid_fraction": s.invalid_fraction, "predicted_rate": s.predicted_rate}
        for name in s.mean:
            row[f"mean_{name}"] = s.mean[name]
            row[f"rmse_{name}"] = s.rmse[name]
        rows.append(row)
    if rows:
        cols = list(rows[0])
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=cols)
            writer.writeheader()
            writer.writerows(rows)
    return rows
