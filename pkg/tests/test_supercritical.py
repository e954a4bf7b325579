import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partial_hawkes.simulator import EventData
from partial_hawkes.supercritical import (
    estimate_supercritical,
    supercritical_from_counts,
    u_p_from_counts,
)


def test_hand_case():
    u, p = u_p_from_counts([2, 4], 2)
    assert u == pytest.approx(-4 / 9, abs=1e-15)
    assert p == 0.0


def test_equal_counts_give_negative_u():
    u, p = u_p_from_counts([7, 7, 7], 5)
    assert u == pytest.approx(-5 / 7)
    assert p == 0.0


def test_no_events():
    ev = EventData.from_lists([[], [], []], 5.0)
    s = estimate_supercritical(ev, 5.0, 2)
    assert (s.u_stat, s.p_hat, s.z_bar) == (0.0, 1.0, 0.0)
    assert math.isnan(s.growth_rate)
    assert s.to_dict()["growth_rate"] is None


def test_positive_u_maps_to_inverse():
    counts = np.array([10, 30])
    zbar = 20
    u_direct = 4 / 2 * np.sum(((counts - zbar) / zbar) ** 2) - 4 / zbar
    u, p = u_p_from_counts(counts, 4)
    assert u == pytest.approx(u_direct) and u > 0
    assert p == pytest.approx(1 / (u_direct + 1))


def test_counts_use_full_history():
    ev = EventData.from_lists([[0.5, 1.0, 3.0], [2.0], [0.1]], 4.0)
    s = estimate_supercritical(ev, 2.0, 2)
    assert s.z_bar == pytest.approx((2 + 1) / 2)
    assert s.growth_rate == pytest.approx(math.log(1.5) / 2)
    with pytest.raises(ValueError):
        estimate_supercritical(ev, 5.0, 2)
    with pytest.raises(ValueError):
        estimate_supercritical(ev, 2.0, 4)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=50), st.integers(1, 500))
def test_p_in_unit_interval(counts, extra):
    N = len(counts) + extra
    u, p = u_p_from_counts(counts, N)
    assert 0.0 <= p <= 1.0
    if sum(counts) == 0:
        assert (u, p) == (0.0, 1.0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 1000), min_size=2, max_size=30), st.integers(2, 50))
def test_scale_structure(counts, c):
    counts = np.array(counts, dtype=float)
    N = 3 * counts.size
    u1, _ = u_p_from_counts(counts, N)
    u2, _ = u_p_from_counts(c * counts, N)
    zbar = counts.mean()
    spread = u1 + N / zbar
    # spread term invariant, N/zbar scales by 1/c
    assert u2 == pytest.approx(spread - N / (c * zbar), rel=1e-9, abs=1e-9)


def test_from_counts_record():
    s = supercritical_from_counts([100, 120, 80], 6, 3.0)
    assert s.K == 3 and s.N == 6 and s.t == 3.0
    assert s.growth_rate == pytest.approx(math.log(100) / 3)
