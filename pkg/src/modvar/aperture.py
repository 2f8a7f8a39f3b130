"""m-slit aperture states in position and momentum space.

Units: hbar = 1. The Fourier convention is

    psi_hat(k) = (2 pi)^(-1/2) * integral psi(x) exp(-i k x) dx

so a single rectangle of width ``a`` and height ``1/sqrt(a)`` centred at
the origin transforms to ``sqrt(a / (2 pi)) * sinc(a k / 2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "SlitConfig",
    "Rectangle",
    "PositionState",
    "Form",
    "MomentumEvaluator",
    "sinc",
    "f_m",
    "f_m_squared",
    "build_position_state",
    "eval_momentum_sum",
    "eval_momentum_product",
    "is_admissible",
    "is_power_of_two",
]

_SINC_SERIES_CUTOFF = 1e-8


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SlitConfig:
    """Aperture geometry: slit width ``a``, slit separation ``T``, slit count ``m``.

    ``m`` must be even and at least 2. The one exception is ``m == 1``, which
    describes a single slit; it can be evaluated and sampled, but every
    routine that needs an admissible state refuses it. Use
    :meth:`single_slit` to build one.
    """

    slit_width_a: float
    separation_T: float
    slit_count_m: int

    def __post_init__(self):
        a, T, m = self.slit_width_a, self.separation_T, self.slit_count_m
        if isinstance(m, bool) or int(m) != m:
            raise ConfigError(f"slit count must be an integer, got {m!r}")
        object.__setattr__(self, "slit_count_m", int(m))
        m = int(m)
        if not (math.isfinite(a) and a > 0):
            raise ConfigError(f"slit width must be positive, got {a!r}")
        if not (math.isfinite(T) and T > 0):
            raise ConfigError(f"slit separation must be positive, got {T!r}")
        if m != 1:
            if m < 2:
                raise ConfigError(f"slit count must be at least 2, got {m}")
            if m % 2:
                raise ConfigError(f"slit count must be even, got {m}")
        if a >= T:
            raise ConfigError(
                f"slit width a={a} must be smaller than the separation T={T}"
            )

    @classmethod
    def single_slit(cls, a: float, T: float) -> "SlitConfig":
        return cls(a, T, 1)

    @property
    def is_single_slit(self) -> bool:
        return self.slit_count_m == 1

    @property
    def K(self) -> float:
        """Fringe period 2 pi / T."""
        return 2.0 * math.pi / self.separation_T

    @property
    def K_refined(self) -> float:
        """Node period 4 pi / (m T) of the m-slit pattern."""
        return 4.0 * math.pi / (self.slit_count_m * self.separation_T)

    @property
    def d(self) -> int | None:
        """log2(m) when m is a power of two, else None."""
        m = self.slit_count_m
        return m.bit_length() - 1 if is_power_of_two(m) else None

    def require_multislit(self) -> None:
        if self.is_single_slit:
            raise ConfigError(
                "single-slit states are not admissible; moments are undefined"
            )


@dataclass(frozen=True)
class Rectangle:
    center: float
    width: float
    amplitude: float

    @property
    def lo(self) -> float:
        return self.center - 0.5 * self.width

    @property
    def hi(self) -> float:
        return self.center + 0.5 * self.width

    @property
    def mass(self) -> float:
        return self.amplitude**2 * self.width


@dataclass(frozen=True)
class PositionState:
    """Piecewise-constant wavefunction, a sorted tuple of disjoint rectangles."""

    rectangles: tuple[Rectangle, ...]
    norm: float = field(init=False)

    def __post_init__(self):
        rects = tuple(sorted(self.rectangles, key=lambda r: r.center))
        for left, right in zip(rects, rects[1:]):
            if left.hi >= right.lo:
                raise ConfigError("rectangles overlap")
        object.__setattr__(self, "rectangles", rects)
        object.__setattr__(self, "norm", math.fsum(r.mass for r in rects))

    @property
    def centers(self) -> np.ndarray:
        return np.array([r.center for r in self.rectangles])

    def __call__(self, x):
        """Evaluate psi(x); intervals are closed."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for r in self.rectangles:
            out = np.where((x >= r.lo) & (x <= r.hi), r.amplitude, out)
        return out


def build_position_state(config: SlitConfig) -> PositionState:
    """Rectangles of width a and height 1/sqrt(m a) at +-(2j-1) T/2, j = 1..m/2."""
    config.require_multislit()
    a, T, m = config.slit_width_a, config.separation_T, config.slit_count_m
    amp = 1.0 / math.sqrt(m * a)
    rects = []
    for j in range(1, m // 2 + 1):
        c = (2 * j - 1) * T / 2
        rects.append(Rectangle(-c, a, amp))
        rects.append(Rectangle(c, a, amp))
    return PositionState(tuple(rects))


def sinc(x):
    """Unnormalised sinc, sin(x)/x, with the removable point patched by series."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def f_m(m: int, kappa):
    """Fringe factor sum_{j=1}^{m/2} cos((2j-1) kappa)."""
    if m < 2 or m % 2:
        raise ConfigError(f"slit count must be even and >= 2, got {m}")
    kappa = np.asarray(kappa, dtype=float)
    out = np.zeros_like(kappa)
    for j in range(1, m // 2 + 1):
        out = out + np.cos((2 * j - 1) * kappa)
    return out


def f_m_squared(m: int, kappa):
    """f_m(kappa)^2 through the closed Dirichlet form sin^2(m kappa) / (4 sin^2 kappa).

    Costs O(1) per point instead of O(m). Falls back to the direct sum where
    sin(kappa) is too small for the quotient to be well conditioned.
    """
    if m < 2 or m % 2:
        raise ConfigError(f"slit count must be even and >= 2, got {m}")
    kappa = np.asarray(kappa, dtype=float)
    s = np.sin(kappa)
    near_pole = np.abs(s) < 1e-4
    s_safe = np.where(near_pole, 1.0, s)
    out = np.sin(m * kappa) ** 2 / (4.0 * s_safe**2)
    if np.any(near_pole):
        out = np.where(near_pole, f_m(m, kappa) ** 2, out)
    return out


def eval_momentum_sum(config: SlitConfig, k):
    """psi_hat_m(k) = sqrt(2a/(m pi)) sinc(a k/2) f_m(T k/2)."""
    config.require_multislit()
    a, T, m = config.slit_width_a, config.separation_T, config.slit_count_m
    k = np.asarray(k, dtype=float)
    return math.sqrt(2.0 * a / (m * math.pi)) * sinc(0.5 * a * k) * f_m(m, 0.5 * T * k)


def eval_momentum_product(config: SlitConfig, k):
    """psi_hat_{2^d}(k) = sqrt(2^(d-1) a/pi) sinc(a k/2) prod_{j<d} cos(2^j T k/2).

    ``d = 0`` (single slit) gives sqrt(a/(2 pi)) sinc(a k/2).
    """
    d = config.d
    if d is None:
        raise ConfigError(
            f"product form needs a power-of-two slit count, got {config.slit_count_m}"
        )
    a, T = config.slit_width_a, config.separation_T
    k = np.asarray(k, dtype=float)
    out = math.sqrt(2.0 ** (d - 1) * a / math.pi) * sinc(0.5 * a * k)
    for j in range(d):
        out = out * np.cos(2**j * 0.5 * T * k)
    return out


class Form(enum.Enum):
    SUM = "sum"
    PRODUCT = "product"


@dataclass(frozen=True)
class MomentumEvaluator:
    """Closed-form psi_hat for a configuration, in sum or product form."""

    config: SlitConfig
    form: Form = None

    def __post_init__(self):
        form = self.form
        if form is None:
            form = Form.PRODUCT if self.config.is_single_slit else Form.SUM
        form = Form(form)
        if form is Form.PRODUCT and self.config.d is None:
            raise ConfigError(
                "product form needs a power-of-two slit count, "
                f"got {self.config.slit_count_m}"
            )
        if form is Form.SUM and self.config.is_single_slit:
            raise ConfigError("the sum form is not defined for a single slit")
        object.__setattr__(self, "form", form)

    def __call__(self, k):
        if self.form is Form.PRODUCT:
            return eval_momentum_product(self.config, k)
        return eval_momentum_sum(self.config, k)

    def envelope(self, k):
        """Slit-shape factor sqrt(2a/(m pi)) * sinc(a k/2), times the peak of f_m."""
        a, m = self.config.slit_width_a, self.config.slit_count_m
        peak = 1.0 if m == 1 else m / 2
        pref = math.sqrt(a / (2 * math.pi)) if m == 1 else math.sqrt(2 * a / (m * math.pi))
        return pref * peak * sinc(0.5 * a * np.asarray(k, dtype=float))

    def fine_structure(self, k):
        """Arrangement factor, normalised to 1 at k = 0."""
        T, m = self.config.separation_T, self.config.slit_count_m
        if m == 1:
            return np.ones_like(np.asarray(k, dtype=float))
        if self.form is Form.PRODUCT:
            out = np.ones_like(np.asarray(k, dtype=float))
            for j in range(self.config.d):
                out = out * np.cos(2**j * 0.5 * T * np.asarray(k, dtype=float))
            return out
        return f_m(m, 0.5 * T * np.asarray(k, dtype=float)) / (m / 2)


def is_admissible(config_or_evaluator, j_range: int = 10, period: float | None = None,
                  rel_tol: float = 1e-12):
    """Check that psi_hat vanishes on the lattice (j + 1/2) * period, |j| <= j_range.

    ``period`` defaults to K = 2 pi / T. Returns ``(admissible, residuals)``
    where ``residuals`` are |psi_hat| at the lattice points divided by the
    peak amplitude |psi_hat(0)|.
    """
    ev = config_or_evaluator
    if isinstance(ev, SlitConfig):
        ev = MomentumEvaluator(ev)
    K = ev.config.K if period is None else period
    j = np.arange(-j_range, j_range + 1)
    nodes = (j + 0.5) * K
    peak = abs(float(ev(0.0)))
    residuals = np.abs(ev(nodes)) / peak
    return bool(np.all(residuals <= rel_tol)), residuals
