import math

import numpy as np
import pytest

from modvar.errors import QuadratureError
from modvar.quadrature import TOL_ENV, default_tol, integrate, integrate_panels

# (f, a, b, exact)
REFERENCE = [
    (lambda x: x**3, 0.0, 2.0, 4.0),
    (np.exp, 0.0, 1.0, math.e - 1),
    (np.sin, 0.0, math.pi, 2.0),
    (lambda x: np.cos(x) ** 2, -math.pi, math.pi, math.pi),
    (lambda x: 1 / (1 + x * x), -1.0, 1.0, math.pi / 2),
    (lambda x: 1 / (1 + 25 * x * x), -1.0, 1.0, 0.4 * math.atan(5)),
    (np.sqrt, 0.0, 1.0, 2 / 3),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.29),
    (lambda x: np.log(x), 1e-12, 1.0, -1.0 + 1e-12 - 1e-12 * math.log(1e-12)),
    (lambda x: np.exp(-x * x), -6.0, 6.0, math.sqrt(math.pi) * math.erf(6)),
    (lambda x: x * np.sin(30 * x), 0.0, 2 * math.pi, -2 * math.pi / 30),
    (lambda x: np.sin(50 * x) ** 2, 0.0, math.pi, math.pi / 2),
    (lambda x: 1 / x, 1.0, 10.0, math.log(10)),
    (lambda x: x**20, 0.0, 1.0, 1 / 21),
    (lambda x: np.exp(x) * np.cos(x), 0.0, math.pi, -(math.exp(math.pi) + 1) / 2),
    (lambda x: np.floor(x), 0.0, 3.5, 0 + 1 + 2 + 1.5),
    (lambda x: x ** -0.5, 1e-10, 1.0, 2 - 2e-5),
    (lambda x: np.cosh(x), -2.0, 2.0, 2 * math.sinh(2)),
    (lambda x: 1 / (2 + np.cos(x)), 0.0, 2 * math.pi, 2 * math.pi / math.sqrt(3)),
    (lambda x: x * x * np.cos(x) ** 2, -math.pi / 2, math.pi / 2, math.pi / 24 * (math.pi**2 - 6)),
]


@pytest.mark.parametrize("case", range(len(REFERENCE)))
def test_error_estimate_is_honest(case):
    f, a, b, exact = REFERENCE[case]
    res = integrate(f, a, b, abs_tol=1e-10)
    assert res.abs_error_estimate <= 1e-10
    assert abs(res.value - exact) <= max(res.abs_error_estimate, 1e-13)


@pytest.mark.parametrize("m", [2, 20, 100, 400])
def test_oscillatory(m):
    res = integrate(lambda x: np.cos(2 * m * x) ** 2, -math.pi / 2, math.pi / 2, abs_tol=1e-11)
    assert res.value == pytest.approx(math.pi / 2, abs=1e-11)


def test_below_round_off_floor_raises():
    with pytest.raises(QuadratureError) as info:
        integrate(np.exp, 0.0, 1.0, abs_tol=1e-20)
    assert info.value.best is not None
    assert info.value.best.value == pytest.approx(math.e - 1)


def test_depth_limit_raises():
    with pytest.raises(QuadratureError, match="max_depth"):
        integrate(lambda x: np.sign(x - 0.123456789), 0.0, 1.0, abs_tol=1e-12, max_depth=5)


def test_non_finite_integrand():
    with pytest.raises(QuadratureError), np.errstate(divide="ignore"):
        integrate(lambda x: 1 / (x - 0.5), 0.0, 1.0)


def test_input_validation():
    with pytest.raises(ValueError):
        integrate(np.exp, 1.0, 0.0)
    with pytest.raises(ValueError):
        integrate(np.exp, 0.0, 1.0, abs_tol=-1.0)
    with pytest.raises(ValueError, match="vectorised"):
        integrate(lambda x: 1.0, 0.0, 1.0)


def test_env_override(monkeypatch):
    monkeypatch.delenv(TOL_ENV, raising=False)
    assert default_tol() == 1e-12
    monkeypatch.setenv(TOL_ENV, "1e-6")
    assert default_tol() == 1e-6
    loose = integrate(np.exp, 0.0, 1.0)
    assert loose.abs_error_estimate <= 1e-6
    monkeypatch.setenv(TOL_ENV, "0")
    with pytest.raises(ValueError):
        default_tol()


def test_deterministic():
    f = lambda x: np.sin(37 * x) * np.exp(-x)  # noqa: E731
    assert integrate(f, 0.0, 5.0) == integrate(f, 0.0, 5.0)


def test_fixed_panels():
    edges = np.linspace(0.0, 2 * math.pi, 65)
    res = integrate_panels(lambda x: np.abs(np.sin(x)), edges)
    assert res.value == pytest.approx(4.0, abs=1e-12)
    assert res.evaluations == 64 * 15
    assert res.abs_error_estimate < 1e-10
