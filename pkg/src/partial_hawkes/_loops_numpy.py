"""Pure-numpy fallbacks for the numba kernels.

The thinning loops step one candidate at a time but vectorise the O(N)
work per candidate. Sums use ``np.cumsum`` so the accumulation order, and
hence every accept/reject decision, matches the numba loops exactly.
"""

import math

import numpy as np


def exp_thinning(theta_t, mu, jump, b, horizon, state, S, unif,
                 out_t, out_i, n_out, trace, trace_on):
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
        bound = np.cumsum(mu + S)[-1]
        u1, u2 = unif[used]
        used += 1
        tau = t - math.log1p(-u1) / bound
        if tau > horizon:
            t = horizon
            status = 0
            break
        S *= math.exp(-b * (tau - t))
        t = tau
        x = u2 * bound
        lam = mu + S
        cs = np.cumsum(lam)
        if not x < cs[-1]:
            continue
        chosen = int(np.searchsorted(cs, x, side="right"))
        if n_out > 0 and out_t[n_out - 1] == tau:
            status = 3
            break
        if trace_on:
            trace[n_out] = lam
        out_t[n_out] = tau
        out_i[n_out] = chosen
        n_out += 1
        S += jump * theta_t[chosen]
    state[0] = t
    return n_out, used, status


def box_thinning(theta_t, mu, height, w, horizon, state, cnt, head_arr, unif,
                 out_t, out_i, n_out, trace, trace_on):
    t = state[0]
    head = int(head_arr[0])
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
        bound = np.cumsum(mu + height * cnt)[-1]
        u1, u2 = unif[used]
        used += 1
        tau = t - math.log1p(-u1) / bound
        if tau > horizon:
            t = horizon
            status = 0
            break
        t = tau
        stop = head + int(np.searchsorted(out_t[head:n_out] + w, tau, side="left"))
        if stop > head:
            expired = np.bincount(out_i[head:stop], minlength=cnt.shape[0])
            cnt -= expired @ theta_t
            head = stop
        x = u2 * bound
        lam = mu + height * cnt
        cs = np.cumsum(lam)
        if not x < cs[-1]:
            continue
        chosen = int(np.searchsorted(cs, x, side="right"))
        if n_out > 0 and out_t[n_out - 1] == tau:
            status = 3
            break
        if trace_on:
            trace[n_out] = lam
        out_t[n_out] = tau
        out_i[n_out] = chosen
        n_out += 1
        cnt += theta_t[chosen]
    state[0] = t
    head_arr[0] = head
    return n_out, used, status


def exp_decayed_sums(times, wts, b):
    """Blocked closed form of the recursion in the numba kernel.

    Within a block starting at r the sum is exp(-b (t_k - r)) times a cumsum of
    w_m exp(b (t_m - r)); blocks span at most 40 / b so nothing overflows.
    Agrees with the numba recursion to rounding, not bit-for-bit.
    """
    times = np.asarray(times, dtype=float)
    wts = np.asarray(wts, dtype=float)
    n = times.shape[0]
    G = np.zeros(n)
    C = np.zeros(n)
    if n == 0:
        return G, C
    C[1:] = np.cumsum(wts)[:-1]
    span = 40.0 / b
    start = 0
    carry = 0.0  # G evaluated at the current block start
    while start < n:
        r = times[start]
        stop = int(np.searchsorted(times, r + span, side="right"))
        stop = max(stop, start + 1)
        tt = times[start:stop] - r
        grow = wts[start:stop] * np.exp(b * tt)
        inner = np.concatenate(([0.0], np.cumsum(grow)[:-1]))
        G[start:stop] = np.exp(-b * tt) * (carry + inner)
        if stop < n:
            # mass at the next block start from everything up to stop - 1
            last = stop - 1
            g_last = G[last]
            carry = (g_last + wts[last]) * math.exp(-b * (times[stop] - times[last]))
        start = stop
    return G, C
