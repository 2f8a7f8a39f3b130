import math

import numpy as np
import pytest

from modvar.aperture import (
    Form,
    MomentumEvaluator,
    SlitConfig,
    build_position_state,
    eval_momentum_product,
    eval_momentum_sum,
    f_m,
    f_m_squared,
    is_admissible,
    is_power_of_two,
    sinc,
)
from modvar.errors import ConfigError


@pytest.mark.parametrize("m", [0, -2, 3, 7])
def test_rejects_bad_slit_counts(m):
    with pytest.raises(ConfigError):
        SlitConfig(1.0, 5.0, m)


def test_odd_count_message():
    with pytest.raises(ConfigError, match="must be even, got 3"):
        SlitConfig(1.0, 5.0, 3)


@pytest.mark.parametrize("a,T", [(5.0, 5.0), (6.0, 5.0), (0.0, 5.0), (-1.0, 5.0), (1.0, math.inf)])
def test_rejects_bad_geometry(a, T):
    with pytest.raises(ConfigError):
        SlitConfig(a, T, 2)


def test_single_slit_is_flagged():
    cfg = SlitConfig.single_slit(1.0, 5.0)
    assert cfg.is_single_slit
    with pytest.raises(ConfigError):
        cfg.require_multislit()
    with pytest.raises(ConfigError):
        MomentumEvaluator(cfg, Form.SUM)


def test_periods():
    cfg = SlitConfig(1.0, 5.0, 8)
    assert cfg.K == pytest.approx(2 * math.pi / 5)
    assert cfg.K_refined == pytest.approx(cfg.K / 4)
    assert cfg.d == 3
    assert SlitConfig(1.0, 5.0, 6).d is None
    assert [n for n in range(1, 70) if is_power_of_two(n)] == [1, 2, 4, 8, 16, 32, 64]


def test_sinc_is_smooth_through_zero():
    x = np.array([-1e-9, 0.0, 1e-9, 1e-8, 0.5])
    got = sinc(x)
    assert got[1] == 1.0
    assert got[-1] == pytest.approx(math.sin(0.5) / 0.5, rel=1e-15)
    assert np.all(np.abs(got[:4] - 1) < 1e-16)


@pytest.mark.parametrize("m", [2, 4, 10, 64, 200])
def test_f_m_squared_matches_direct_sum(m):
    kappa = np.concatenate([np.linspace(-4, 4, 3001), [0.0, math.pi, -math.pi, math.pi / 2]])
    np.testing.assert_allclose(f_m_squared(m, kappa), f_m(m, kappa) ** 2,
                               rtol=0, atol=1e-12 * m * m)


@pytest.mark.parametrize("m", [2, 4, 8, 16, 32])
def test_sum_and_product_forms_agree(m):
    cfg = SlitConfig(0.7, 3.0, m)
    k = np.linspace(-40, 40, 5001)
    np.testing.assert_allclose(eval_momentum_product(cfg, k), eval_momentum_sum(cfg, k), atol=1e-12)


def test_product_form_needs_power_of_two():
    with pytest.raises(ConfigError):
        MomentumEvaluator(SlitConfig(1.0, 5.0, 6), Form.PRODUCT)


@pytest.mark.parametrize("m", [2, 6, 16])
def test_transform_matches_numerical_fourier_integral(m):
    cfg = SlitConfig(1.0, 5.0, m)
    state = build_position_state(cfg)
    k = np.array([0.0, 0.4, 1.3, 2.9])
    x = np.linspace(state.rectangles[0].lo, state.rectangles[-1].hi, 400001)
    dx = x[1] - x[0]
    psi = state(x)
    num = np.array([np.sum(psi * np.exp(-1j * kk * x)).real * dx for kk in k]) / math.sqrt(2 * math.pi)
    np.testing.assert_allclose(MomentumEvaluator(cfg)(k), num, atol=2e-4)


def test_single_slit_has_no_position_state():
    with pytest.raises(ConfigError):
        build_position_state(SlitConfig.single_slit(1.0, 5.0))


@pytest.mark.parametrize("m", [2, 4, 12])
def test_position_state_is_normalised(m):
    state = build_position_state(SlitConfig(0.8, 2.0, m))
    assert sum(r.mass for r in state.rectangles) == pytest.approx(1.0, rel=1e-14)
    centres = state.centers
    np.testing.assert_allclose(centres, -centres[::-1])


def test_envelope_times_fine_structure():
    ev = MomentumEvaluator(SlitConfig(1.0, 5.0, 8))
    k = np.linspace(-20, 20, 801)
    np.testing.assert_allclose(ev.envelope(k) * ev.fine_structure(k), ev(k), atol=1e-14)


def test_admissibility():
    ok, res = is_admissible(SlitConfig(1.0, 5.0, 4))
    assert ok and res.max() < 1e-12
    ok, res = is_admissible(SlitConfig.single_slit(1.0, 5.0))
    assert not ok and res.max() > 0.1
    # psi_m also vanishes on the finer node lattice of period K'
    cfg = SlitConfig(1.0, 5.0, 8)
    assert is_admissible(cfg, period=cfg.K_refined)[0]
