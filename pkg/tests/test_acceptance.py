"""Exit criteria, each at its stated tolerance. Seeds are fixed up front.

Run alone with ``pytest tests/test_acceptance.py -v``; a summary block with one
PASS/FAIL line per criterion is printed at the end of the session.
"""

import math
import sys

import numpy as np
import pytest
from scipy import stats

from partial_hawkes import toy
from partial_hawkes.graph import (
    Graph,
    check_omega_subcritical,
    check_omega_supercritical,
    operator_norm,
    perron,
    resolvent_vectors,
    sample_graph,
)
from partial_hawkes.harness import RunConfig, run_sweep, summarize_grid
from partial_hawkes.kernels import BoxKernel, ExponentialKernel
from partial_hawkes.rng import derive_seed
from partial_hawkes.simulator import SimConfig, intensity_probe, rescaling_residuals, simulate
from partial_hawkes.subcritical import limit_triple, psi

pytestmark = pytest.mark.acceptance

EXP12 = {"type": "exponential", "a": 1.0, "b": 2.0}


def sweep(**kw):
    base = dict(regime="subcritical", mu=1.0, kernel=EXP12, p=0.5, q=10)
    return list(run_sweep(RunConfig.from_dict({**base, **kw})))


def test_c1_psi_inversion(verdict):
    worst = 0.0
    for mu in (0.5, 1, 2):
        for L in (0.2, 0.8):
            for p in (0.3, 0.9):
                if L * p >= 1:
                    continue
                est = psi(*limit_triple(mu, L, p))
                worst = max(worst, *(abs(a - b) for a, b in zip(est.as_tuple(), (mu, L, p))))
    verdict("C1 psi inversion", worst <= 1e-12, f"max componentwise error {worst:.2e} (tol 1e-12)")


def test_c2_compensator_ks(verdict):
    N, T = 10, 500.0
    kern = ExponentialKernel(1, 2)
    conf = SimConfig(sample_graph(N, 0.5, 201), 1.0, kern, T, 202)
    ev = simulate(conf)
    ok = sum(stats.kstest(rescaling_residuals(ev, conf, i), "expon").pvalue > 0.01 for i in range(N))
    ctrl = SimConfig(Graph.from_theta(np.zeros((N, N), bool)), 1.0, kern, T, 203)
    ev0 = simulate(ctrl)
    ok0 = sum(stats.kstest(rescaling_residuals(ev0, ctrl, i), "expon").pvalue > 0.01 for i in range(N))
    verdict("C2 simulator compensator", ok >= 8 and ok0 >= 9,
            f"KS passes {ok}/10 (need 8), Poisson control {ok0}/10 (need 9)")


def test_c3_intensity_oracle(verdict):
    rng = np.random.default_rng(300)
    worst, n_checked = 0.0, 0
    for run in range(20):
        kern = ExponentialKernel(1.0, 2.0) if run % 2 == 0 else BoxKernel(2.0, 0.25)
        p = float(rng.uniform(0.2, 1.0))
        conf = SimConfig(sample_graph(5, p, derive_seed(300, run, 1)), 1.0, kern,
                         float(rng.uniform(20, 80)), derive_seed(300, run, 2), max_events=1000)
        ev = simulate(conf, trace=True)
        for k in range(ev.total_events):
            i = ev.ids[k]
            worst = max(worst, abs(ev.intensity_trace[k, i] - intensity_probe(ev, conf, i, ev.times[k])))
            n_checked += 1
    verdict("C3 intensity oracle", worst <= 1e-9,
            f"max |recursive - probe| = {worst:.2e} over {n_checked} events (tol 1e-9)")


def test_c4_subcritical_mean(verdict):
    recs = sweep(N=[100], t=[200.0], replicates=20, base_seed=400)
    eps = np.mean([r.epsilon for r in recs])
    verdict("C4 subcritical mean law", abs(eps - 4 / 3) <= 0.05,
            f"mean epsilon {eps:.4f} vs 4/3 (tol 0.05)")


def test_c5_v_x_targets(verdict):
    recs = sweep(N=[200], t=[400.0], replicates=50, base_seed=500)
    v = np.mean([r.v_stat for r in recs])
    x = np.mean([r.x_stat for r in recs])
    ph = [r.p_hat for r in recs if r.valid]
    p_mean = np.mean(ph) if ph else math.nan
    ok = abs(v / (1 / 9) - 1) <= 0.25 and abs(x / (64 / 27) - 1) <= 0.30 and abs(p_mean - 0.5) <= 0.15
    verdict("C5 V and X targets", bool(ok),
            f"mean V {v:.4f} (1/9 +-25%), mean X {x:.4f} (64/27 +-30%), "
            f"mean p_hat {p_mean:.4f} over {len(ph)}/50 valid (0.5 +-0.15)")


def test_c6_rate_monotone(verdict):
    recs = sweep(N=[200], t=[100.0, 400.0], replicates=20, base_seed=600)
    by_t = {s.t: s for s in summarize_grid(recs)}
    r100, r400 = by_t[100.0].rmse["p"], by_t[400.0].rmse["p"]
    verdict("C6 rate monotonicity", r400 < r100,
            f"RMSE(p_hat) t=400 {r400:.4f} vs t=100 {r100:.4f} "
            f"(valid {by_t[400.0].n_valid}/20, {by_t[100.0].n_valid}/20)")


def test_c7_supercritical(verdict):
    recs = sweep(regime="supercritical", kernel={"type": "exponential", "a": 6.0, "b": 2.0},
                 N=[200], t=[8.0], replicates=20, base_seed=700, max_events=10**7)
    overflow = sum(r.status == "overflow" for r in recs)
    done = [r for r in recs if r.status != "overflow"]
    p_mean = np.mean([r.p_hat for r in done]) if done else math.nan
    growth = [r.growth_rate for r in done if r.growth_rate is not None]
    g_mean = np.mean(growth) if growth else math.nan
    ok = overflow == 0 and abs(p_mean - 0.5) <= 0.10 and 0.85 <= g_mean <= 1.15
    verdict("C7 supercritical", bool(ok),
            f"mean P_hat {p_mean:.4f} (0.5 +-0.10), mean log(Zbar_t)/t {g_mean:.4f} "
            f"in [0.85, 1.15] (per-replicate range {min(growth):.3f}..{max(growth):.3f}), "
            f"overflows {overflow}")


def test_c8a_toy1_variance(verdict):
    cfg = toy.Toy1Config(N=1000, K=500, Gamma=2.0, p=0.5, m_t=100.0, replicates=10**5, seed=801)
    _, T = toy.toy1_trial(cfg)
    s = toy.summarize(T, 1 / cfg.p - 1, toy.toy1_var_formula(cfg))
    verdict("C8a toy-1 variance", abs(s["ratio"] - 1) <= 0.10,
            f"Var(T) {s['variance']:.5f} vs formula {s['formula_variance']:.5f}, "
            f"ratio {s['ratio']:.4f} (tol 10%)")


def test_c8b_toy2_variance(verdict):
    cfg = toy.Toy2Config(N=200, K=100, T=50, mu=1.0, p=0.5, replicates=10**4, seed=802)
    C = toy.toy2_trial(cfg)
    s = toy.summarize(C, cfg.p**2, toy.toy2_var_display(cfg))
    exact = s["variance"] / toy.toy2_var_exact(cfg)
    verdict("C8b toy-2 variance", abs(s["ratio"] - 1) <= 0.10,
            f"Var(C_T) {s['variance']:.5f} vs formula {s['formula_variance']:.5f}, "
            f"ratio {s['ratio']:.4f} (tol 10%); vs exact chi-square variance ratio {exact:.4f}")


def test_c9_graph_events(verdict):
    sub = sum(check_omega_subcritical(sample_graph(500, 0.5, derive_seed(900, s)), 0.5, 0.5, 100)
              for s in range(100))
    N, p, K = 1000, 0.5, 100
    lo, hi = p * (1 - N ** -0.375 / 2), p * (1 + N ** -0.375 / 2)
    sup, bracket_ok = 0, 0
    for s in range(100):
        g = sample_graph(N, p, derive_seed(901, s))
        if check_omega_supercritical(g, p, K):
            sup += 1
            rho = perron(g).rho
            bracket_ok += lo <= rho <= hi
    ok = sub >= 99 and sup >= 95 and bracket_ok == sup
    verdict("C9 graph events", ok,
            f"Omega_(N,K) {sub}/100 (need 99); Omega_N^(K,2) {sup}/100 (need 95); "
            f"rho_N in bracket on {bracket_ok}/{sup} successes")


def test_c10_resolvent(verdict):
    worst = 0.0
    for s in range(100):
        g = sample_graph(300, 0.5, derive_seed(1000, s))
        r = resolvent_vectors(g, 0.5, 60)
        worst = max(worst, r.residual_ell, r.residual_c)
    rng = np.random.default_rng(1001)
    neumann = 0.0
    for s in range(50):
        N = int(rng.integers(2, 9))
        g = sample_graph(N, float(rng.uniform(0.2, 1.0)), derive_seed(1001, s))
        norm = operator_norm(g, np.inf)
        Lambda = 0.9 / norm if norm else 0.5
        A = g.scaled_dense()
        # sum the series until the terms vanish; a fixed 61-term cut leaves up to 0.9^61/0.1
        term, ell = np.ones(N), np.zeros(N)
        while term.max() > 1e-18:
            ell += term
            term = Lambda * A @ term
        neumann = max(neumann, float(np.max(np.abs(resolvent_vectors(g, Lambda, N).ell - ell))))
    ok = worst <= 1e-10 and neumann <= 1e-8
    verdict("C10 resolvent correctness", ok,
            f"max residual {worst:.2e} over 100 instances (tol 1e-10); "
            f"Neumann oracle gap {neumann:.2e} at N<=8 (tol 1e-8)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
