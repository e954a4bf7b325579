"""numba kernels. Must stay bit-compatible with ``_loops_numpy``.

Status codes returned by the thinning loops:
0 horizon reached, 1 uniform buffer used up, 2 output buffer full,
3 two accepted events at the same floating-point time.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def exp_thinning(theta_t, mu, jump, b, horizon, state, S, unif,
                 out_t, out_i, n_out, trace, trace_on):
    N = S.shape[0]
    t = state[0]
    used = 0
    n_unif = unif.shape[0]
    cap = out_t.shape[0]
    status = 0
    while True:
        if n_out >= cap:
            status = 2
            break
        if used >= n_unif:
            status = 1
            break
        bound = 0.0
        for k in range(N):
            bound += mu + S[k]
        u1 = unif[used, 0]
        u2 = unif[used, 1]
        used += 1
        tau = t - math.log1p(-u1) / bound
        if tau > horizon:
            t = horizon
            status = 0
            break
        decay = math.exp(-b * (tau - t))
        for k in range(N):
            S[k] *= decay
        t = tau
        x = u2 * bound
        acc = 0.0
        chosen = -1
        for k in range(N):
            acc += mu + S[k]
            if x < acc:
                chosen = k
                break
        if chosen < 0:
            continue
        if n_out > 0 and out_t[n_out - 1] == tau:
            status = 3
            break
        if trace_on:
            for k in range(N):
                trace[n_out, k] = mu + S[k]
        out_t[n_out] = tau
        out_i[n_out] = chosen
        n_out += 1
        for k in range(N):
            S[k] += jump * theta_t[chosen, k]
    state[0] = t
    return n_out, used, status


@njit(cache=True)
def box_thinning(theta_t, mu, height, w, horizon, state, cnt, head_arr, unif,
                 out_t, out_i, n_out, trace, trace_on):
    N = cnt.shape[0]
    t = state[0]
    head = head_arr[0]
    used = 0
    n_unif = unif.shape[0]
    cap = out_t.shape[0]
    status = 0
    while True:
        if n_out >= cap:
            status = 2
            break
        if used >= n_unif:
            status = 1
            break
        bound = 0.0
        for k in range(N):
            bound += mu + height * cnt[k]
        u1 = unif[used, 0]
        u2 = unif[used, 1]
        used += 1
        tau = t - math.log1p(-u1) / bound
        if tau > horizon:
            t = horizon
            status = 0
            break
        t = tau
        while head < n_out and out_t[head] + w < tau:
            j = out_i[head]
            for k in range(N):
                cnt[k] -= theta_t[j, k]
            head += 1
        x = u2 * bound
        acc = 0.0
        chosen = -1
        for k in range(N):
            acc += mu + height * cnt[k]
            if x < acc:
                chosen = k
                break
        if chosen < 0:
            continue
        if n_out > 0 and out_t[n_out - 1] == tau:
            status = 3
            break
        if trace_on:
            for k in range(N):
                trace[n_out, k] = mu + height * cnt[k]
        out_t[n_out] = tau
        out_i[n_out] = chosen
        n_out += 1
        for k in range(N):
            cnt[k] += theta_t[chosen, k]
    state[0] = t
    head_arr[0] = head
    return n_out, used, status


@njit(cache=True)
def exp_decayed_sums(times, wts, b):
    """G[k] = sum_{m<k} w_m exp(-b (t_k - t_m)) and C[k] = sum_{m<k} w_m."""
    n = times.shape[0]
    G = np.zeros(n)
    C = np.zeros(n)
    g = 0.0
    c = 0.0
    for k in range(1, n):
        g = (g + wts[k - 1]) * math.exp(-b * (times[k] - times[k - 1]))
        c += wts[k - 1]
        G[k] = g
        C[k] = c
    return G, C
