"""Sawtooth operators: ranges, exact splits, edge conventions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modvar.errors import ConfigError
from modvar.modular import (
    ModularSpec,
    p_K,
    p_mod,
    p_mod_on_lattice,
    p_mod_refined,
    q_mod,
    q_T,
    refined_period,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
periods = st.floats(min_value=1e-3, max_value=1e3)


@settings(max_examples=500)
@given(finite, periods)
def test_momentum_split_is_exact(k, K):
    assert p_mod(k, K) + p_K(k, K) == k
    r = float(p_mod(k, K))
    assert -K / 2 < r <= K / 2
    j = float(p_K(k, K)) / K
    assert abs(j - round(j)) <= 1e-9 * max(1.0, abs(j))


@settings(max_examples=500)
@given(st.floats(min_value=0, max_value=1e6), periods)
def test_position_split_is_exact(x, T):
    assert q_mod(x, T) + q_T(x, T) == x
    assert 0 <= q_mod(x, T) < T


@given(finite, periods)
def test_position_range_for_all_signs(x, T):
    r = float(q_mod(x, T))
    assert 0 <= r < T
    assert abs(r + float(q_T(x, T)) - x) <= 4 * np.spacing(max(abs(x), T))


def test_upper_edge_convention():
    K = 2.0
    assert p_mod(1.0, K) == 1.0
    assert p_mod(-1.0, K) == 1.0
    assert p_mod(3.0, K) == 1.0
    assert p_mod(np.nextafter(1.0, 2.0), K) < 0


def test_tiny_negative_position_stays_below_period():
    assert q_mod(-1e-300, 5.0) < 5.0
    assert q_T(-1e-300, 5.0) == -5.0


@pytest.mark.parametrize("fn", [q_mod, q_T, p_mod, p_K])
def test_bad_period(fn):
    with pytest.raises(ConfigError):
        fn(1.0, 0.0)


def test_refined_period():
    assert refined_period(2, 5.0) == pytest.approx(2 * math.pi / 5)
    assert refined_period(8, 5.0) == pytest.approx(math.pi / 10)
    with pytest.raises(ConfigError):
        refined_period(3, 5.0)
    k = np.linspace(-3, 3, 101)
    np.testing.assert_array_equal(p_mod_refined(k, 8, 5.0), p_mod(k, math.pi / 10))


def test_spec_dispatch():
    assert ModularSpec.position(2.0).reduce(5.0) == 1.0
    assert ModularSpec.momentum(2.0, 2).period == pytest.approx(math.pi / 2)
    with pytest.raises(ConfigError):
        ModularSpec(-1.0, True)


def test_lattice_version_agrees_off_the_jumps():
    N, K = 16, 1.3
    idx = np.arange(-200, 201)
    lattice = p_mod_on_lattice(idx, N, K)
    off_jump = np.mod(idx - N // 2, N) != 0
    np.testing.assert_allclose(lattice[off_jump], p_mod(idx * K / N, K)[off_jump], atol=1e-12)
    np.testing.assert_allclose(lattice[~off_jump], K / 2)
    np.testing.assert_array_equal(lattice[:N], lattice[N:2 * N])
