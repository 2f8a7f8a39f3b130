"""Standard deviations and uncertainty products for the m-slit states.

Every fringe-width moment has at least two independent routes:

* closed forms, where they exist;
* single-fringe quadrature: the slit envelope drops out and only one
  period of kappa = T k / 2 has to be integrated,
      var = 16 / (T^2 m pi) * int_{-pi/2}^{pi/2} p(kappa)^2 f_m(kappa)^2 dkappa
  with p the (rescaled) modular momentum;
* brute-force quadrature of p_mod(k)^2 |psi_hat_m(k)|^2 over the whole
  line, truncated where an analytic bound on the sinc^2 tail is met.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass

import numpy as np

from . import modular
from .aperture import SlitConfig, build_position_state, eval_momentum_sum, f_m_squared
from .errors import ConfigError, FitError, QuadratureError
from .quadrature import QuadResult, default_tol, integrate, integrate_panels

__all__ = [
    "Method",
    "MomentReport",
    "SweepRow",
    "SQRT_BOX",
    "sdev_qt",
    "sdev_qt_discrete",
    "sdev_pmod_single_fringe",
    "sdev_pmod_bruteforce",
    "sdev_pmod_refined",
    "sdev_pmod_refined_quadrature",
    "uncertainty_product",
    "sweep",
    "fit_power_law",
    "fit_asymptote",
    "asymptotic_prefactor",
    "tail_bound",
    "MAX_PERIODS",
]

#: sqrt((pi^2 - 6) / 3), the double-slit fringe width times T
SQRT_BOX = math.sqrt((math.pi**2 - 6) / 3)
MAX_PERIODS = 10**6


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    SINGLE_FRINGE = "SingleFringeQuadrature"
    BRUTE_FORCE = "BruteForceQuadrature"


@dataclass(frozen=True)
class MomentReport:
    value: float
    method: Method
    abs_error_estimate: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"a standard deviation must be finite and >= 0, got {self.value}")
        if not (math.isfinite(self.abs_error_estimate) and self.abs_error_estimate >= 0):
            raise ValueError("abs_error_estimate must be finite and non-negative")
        if self.method is Method.CLOSED_FORM and self.abs_error_estimate != 0:
            raise ValueError("closed forms carry no error estimate")

    def __float__(self):
        return float(self.value)


def _sdev_from_variance(q: QuadResult, method: Method) -> MomentReport:
    sd = math.sqrt(q.value)
    return MomentReport(sd, method, float(q.abs_error_estimate) / (2 * sd))


def sdev_qt(config: SlitConfig) -> MomentReport:
    """Delta(Q_T, psi_m) = (T/2) sqrt((m^2 - 1)/3)."""
    config.require_multislit()
    m, T = config.slit_count_m, config.separation_T
    return MomentReport(0.5 * T * math.sqrt((m * m - 1) / 3), Method.CLOSED_FORM)


def sdev_qt_discrete(config: SlitConfig) -> float:
    """Delta(Q_T) as the variance of q_T over the slit probabilities.

    q_T is constant on each rectangle, so its distribution is discrete with
    weight amplitude^2 * width per slit.
    """
    state = build_position_state(config)
    T = config.separation_T
    weights = np.array([r.mass for r in state.rectangles])
    values = np.array([float(modular.q_T(r.center, T)) for r in state.rectangles])
    for r, v in zip(state.rectangles, values):
        if modular.q_T(r.lo, T) != v or modular.q_T(np.nextafter(r.hi, r.lo), T) != v:
            raise ConfigError("slit straddles a cell of Q_T")
    mean = float(weights @ values)
    return math.sqrt(float(weights @ (values - mean) ** 2))


def _fringe_prefactor(config: SlitConfig) -> float:
    return 16.0 / (config.separation_T**2 * config.slit_count_m * math.pi)


def sdev_pmod_single_fringe(config: SlitConfig, abs_tol: float | None = None) -> MomentReport:
    """Delta(P_mod, psi_m) from the one-fringe integral of kappa^2 f_m(kappa)^2.

    The slit width does not enter. ``abs_tol`` applies to the variance.
    """
    config.require_multislit()
    m = config.slit_count_m
    pref = _fringe_prefactor(config)
    tol = default_tol() if abs_tol is None else abs_tol
    q = integrate(lambda x: pref * x * x * f_m_squared(m, x), -0.5 * math.pi, 0.5 * math.pi,
                  abs_tol=tol)
    return _sdev_from_variance(q, Method.SINGLE_FRINGE)


def tail_bound(config: SlitConfig, J: int) -> float:
    """Upper bound on the variance mass outside |k| <= (J + 1/2) K.

    Uses sinc^2(a k / 2) <= 4 / (a k)^2, p_mod^2 <= (K/2)^2 and the exact
    per-period mean m/4 of f_m^2:
        sum over both tails <= K / (pi a J).
    """
    K = config.K
    return K / (math.pi * config.slit_width_a * J)


def sdev_pmod_bruteforce(config: SlitConfig, tail_tol: float = 1e-6) -> MomentReport:
    """Delta(P_mod, psi_m) by integrating p_mod(k)^2 |psi_hat_m(k)|^2 over the line.

    The line is cut into periods of p_mod, each integrated by fixed
    Gauss-Kronrod panels (the integrand is smooth inside a period). The
    number of periods J on each side is the smallest one whose analytic tail
    bound is below ``tail_tol``. The reported error is that bound plus the
    panel error estimate; ``tail_tol`` applies to the variance.
    """
    config.require_multislit()
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    K = config.K
    J = math.ceil(K / (math.pi * config.slit_width_a * tail_tol))
    if J > MAX_PERIODS:
        raise QuadratureError(
            f"tail bound {tail_tol:g} needs {J} periods (limit {MAX_PERIODS})"
        )
    m = config.slit_count_m
    sub = max(2, m)  # f_m^2 has m - 1 oscillations per period
    edges = (np.arange(-J * sub, (J + 1) * sub + 1) / sub - 0.5) * K

    def integrand(k):
        return modular.p_mod(k, K) ** 2 * eval_momentum_sum(config, k) ** 2

    q = integrate_panels(integrand, edges)
    var = QuadResult(q.value, q.abs_error_estimate + tail_bound(config, J), q.evaluations)
    return _sdev_from_variance(var, Method.BRUTE_FORCE)


def sdev_pmod_refined(config: SlitConfig) -> MomentReport:
    """Delta(P_mod(m), psi_m) = (2 / (m T)) sqrt((pi^2 - 6)/3)."""
    config.require_multislit()
    m, T = config.slit_count_m, config.separation_T
    return MomentReport(2 * SQRT_BOX / (m * T), Method.CLOSED_FORM)


def sdev_pmod_refined_quadrature(config: SlitConfig, reduced: bool = False,
                                 abs_tol: float | None = None) -> MomentReport:
    """Quadrature for the refined moment.

    Default: the unreduced fringe integral with the full f_m and the refined
    sawtooth, integrated over a window of m/2 refined periods. With
    ``reduced=True``: (4m / (T^2 pi)) int_{-pi/m}^{pi/m} kappa^2 cos^2(m kappa / 2).
    """
    config.require_multislit()
    m, T = config.slit_count_m, config.separation_T
    tol = default_tol() if abs_tol is None else abs_tol
    if reduced:
        pref = 4 * m / (T * T * math.pi)
        lim = math.pi / m
        q = integrate(lambda x: pref * x * x * np.cos(0.5 * m * x) ** 2, -lim, lim, abs_tol=tol)
        return _sdev_from_variance(q, Method.SINGLE_FRINGE)

    pref = _fringe_prefactor(config)
    Kr = modular.refined_period(m, T)

    def integrand(x):
        # kappa-space sawtooth: (T/2) * p_mod_refined(2 kappa / T)
        p = 0.5 * T * modular.p_mod(2 * x / T, Kr)
        return pref * p * p * f_m_squared(m, x)

    # a pi-wide window starting on a jump; f_m^2 is pi-periodic
    period = 2 * math.pi / m
    n = m // 2
    value = err = 0.0
    evals = 0
    for i in range(n):
        lo = (i - 0.5) * period
        q = integrate(integrand, lo, lo + period, abs_tol=tol / n)
        value += q.value
        err += q.abs_error_estimate
        evals += q.evaluations
    return _sdev_from_variance(QuadResult(value, err, evals), Method.SINGLE_FRINGE)


def uncertainty_product(config: SlitConfig, refined: bool = False) -> float:
    """Delta(Q_T) * Delta(P_mod) (or Delta(P_mod(m)) when ``refined``)."""
    qt = sdev_qt(config).value
    if refined:
        return qt * sdev_pmod_refined(config).value
    return qt * sdev_pmod_single_fringe(config).value


@dataclass(frozen=True)
class SweepRow:
    m: int
    sdev_qt: float
    sdev_pmod: float
    sdev_pmod_refined: float
    product: float
    product_refined: float

    def as_dict(self):
        return asdict(self)


def _row(T, a, m):
    cfg = SlitConfig(a, T, m)
    qt = sdev_qt(cfg).value
    pm = sdev_pmod_single_fringe(cfg).value
    pr = sdev_pmod_refined(cfg).value
    return SweepRow(m, qt, pm, pr, qt * pm, qt * pr)


def sweep(T: float, a: float, m_list) -> list[SweepRow]:
    """One SweepRow per slit count, in ascending m."""
    ms = sorted(set(int(m) for m in m_list))
    if not ms:
        raise ConfigError("empty slit-count list")
    for m in ms:
        if m < 2 or m % 2:
            raise ConfigError(f"slit count must be even, got {m}")
    return [_row(T, a, m) for m in ms]


def fit_power_law(x, y) -> tuple[float, float]:
    """Least-squares fit of log y = log c + p log x; returns (c, p)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("x and y must be 1-D arrays of equal length")
    if x.size < 2 or np.unique(x).size < 2:
        raise FitError("need at least two distinct abscissae")
    if np.any(x <= 0) or np.any(y <= 0):
        raise FitError("power-law fit needs positive data")
    A = np.column_stack([np.ones_like(x), np.log(x)])
    (logc, p), *_ = np.linalg.lstsq(A, np.log(y), rcond=None)
    return float(math.exp(logc)), float(p)


def fit_asymptote(rows, column: str = "sdev_pmod", min_m: int = 20) -> tuple[float, float]:
    """Fit ``column`` against m as c * m^p over rows with m >= ``min_m``.

    Small-m rows bias the prefactor of a large-m law, hence the window.
    """
    use = [r for r in rows if r.m >= min_m]
    ms = [r.m for r in use]
    if len(use) < 5 or len(set(ms)) != len(ms):
        raise FitError(f"need at least 5 rows with distinct m >= {min_m}, got {len(use)}")
    return fit_power_law(ms, [getattr(r, column) for r in use])


def asymptotic_prefactor(T: float) -> float:
    """Large-m limit of Delta(P_mod, psi_m) * sqrt(m): 2 sqrt(ln 2) / T."""
    return 2 * math.sqrt(math.log(2)) / T
