"""Numerical checks of the trigonometric and Fourier identities behind the moments."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aperture import SlitConfig, build_position_state, f_m, sinc
from .quadrature import QuadResult, integrate

__all__ = [
    "IdentityReport",
    "check_product_sum",
    "dirichlet_square",
    "check_dirichlet",
    "sinc_comb_partial",
    "sinc_comb_tail_exponent",
    "ConvolutionResult",
    "convolution_construction",
    "FringeIntegrals",
    "fringe_integral_exact",
    "dirichlet_kernel_weight",
    "riemann_lebesgue",
    "product_form_coefficients",
]


@dataclass(frozen=True)
class IdentityReport:
    name: str
    max_abs_deviation: float
    samples: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_deviation <= self.tolerance)

    def as_dict(self):
        return {
            "name": self.name,
            "max_abs_deviation": self.max_abs_deviation,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _product_side(d, kappa):
    out = np.full_like(kappa, 2.0 ** (d - 1))
    for j in range(d):
        out = out * np.cos(2**j * kappa)
    return out


def check_product_sum(d: int, kappa_samples: int = 10_000, tol: float = 1e-12) -> IdentityReport:
    """2^(d-1) prod_{j<d} cos(2^j k) == sum_{j=1}^{2^(d-1)} cos((2j-1) k) on [-pi, pi]."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    kappa = np.linspace(-math.pi, math.pi, kappa_samples)
    dev = np.max(np.abs(_product_side(d, kappa) - f_m(2**d, kappa)))
    return IdentityReport(f"product-sum d={d}", float(dev), kappa_samples, tol)


def dirichlet_square(m: int, kappa: float):
    """Three forms of f_m(kappa)^2.

    Returns ``(lhs, rhs1, rhs2)``: the squared cosine sum,
    (sin(m k)/sin(k))^2 / 4 and (1 - cos(2 m k)) / (4 (1 - cos(2 k))).
    Both quotients are ``None`` when |sin(kappa)| < 1e-6.
    """
    lhs = float(f_m(m, kappa)) ** 2
    s = math.sin(kappa)
    if abs(s) < 1e-6:
        return lhs, None, None
    rhs1 = (math.sin(m * kappa) / s) ** 2 / 4
    rhs2 = (1 - math.cos(2 * m * kappa)) / (4 * (1 - math.cos(2 * kappa)))
    return lhs, rhs1, rhs2


def check_dirichlet(m: int, samples: int = 2001, tol: float = 1e-10) -> IdentityReport:
    """Three-way agreement of :func:`dirichlet_square` on a grid away from the poles.

    The deviation is relative to max(1, lhs), since the forms grow like m^2.
    The cos(2 m kappa) form loses about m ulps, hence the looser default.
    """
    kappa = np.linspace(0.05, math.pi - 0.05, samples)
    dev = 0.0
    for x in kappa:
        lhs, r1, r2 = dirichlet_square(m, float(x))
        scale = max(1.0, lhs)
        dev = max(dev, abs(lhs - r1) / scale, abs(lhs - r2) / scale)
    return IdentityReport(f"dirichlet m={m}", dev, samples, tol)


def sinc_comb_partial(a: float, T: float, u: float, J: int) -> float:
    """sum_{|j| <= J} sinc^2((a/T)(u + j pi)); tends to T/a with an O(1/J) tail."""
    if not 0 < a < T:
        raise ValueError("need 0 < a < T")
    if J < 1:
        raise ValueError("J must be >= 1")
    j = np.arange(-J, J + 1, dtype=float)
    terms = sinc((a / T) * (u + j * math.pi)) ** 2
    return float(np.sum(np.sort(terms)))


def sinc_comb_tail_exponent(a: float, T: float, u: float, Js=(10**3, 10**4, 10**5)) -> float:
    """Slope of log|S_J - T/a| against log J."""
    err = [abs(sinc_comb_partial(a, T, u, J) - T / a) for J in Js]
    slope = np.polyfit(np.log(np.asarray(Js, dtype=float)), np.log(err), 1)[0]
    return float(slope)


@dataclass(frozen=True)
class ConvolutionResult:
    levels: tuple[float, ...]
    centers: tuple[float, ...]
    report: IdentityReport


def convolution_construction(d: int, T: float = 1.0, k_samples: int = 4001,
                             tol: float = 1e-12) -> ConvolutionResult:
    """Build the 2^d-slit centre set as an iterated convolution of delta pairs.

    Level j is the pair +-2^j (in units of T/2). Centres are kept as exact
    integers during the convolution. The report is the larger of two
    deviations: the centre set against the slit centres of psi_{2^d}
    (in units of T/2), and the transform of the normalised centre comb
    against prod_j cos(2^j T k / 2) on a k grid.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    centers = [0]
    for j in range(d):
        step = 2**j
        centers = [c + s for c in centers for s in (-step, step)]
    centers.sort()

    expected = sorted(int(round(2 * c / T)) for c in
                      build_position_state(SlitConfig(0.5 * T, T, 2**d)).centers)
    if len(set(centers)) != len(centers):
        center_dev = math.inf
    else:
        center_dev = 0.0 if centers == expected else math.inf

    K = 2 * math.pi / T
    k = np.linspace(-4 * K, 4 * K, k_samples)
    comb = np.zeros_like(k)
    for c in centers:
        comb += np.cos(c * 0.5 * T * k)
    comb /= len(centers)
    prod = np.ones_like(k)
    for j in range(d):
        prod *= np.cos(2**j * 0.5 * T * k)
    dev = max(center_dev, float(np.max(np.abs(comb - prod))))
    levels = tuple(2**j * 0.5 * T for j in range(d))
    report = IdentityReport(f"convolution d={d}", dev, k_samples, tol)
    return ConvolutionResult(levels, tuple(c * 0.5 * T for c in centers), report)


def dirichlet_kernel_weight(kappa):
    """kappa^2 / (1 - cos 2 kappa), evaluated as kappa^2 / (2 sin^2 kappa).

    Below |kappa| < 1e-3 the denominator is replaced by its series
    2 k^2 - 2 k^4/3 + 4 k^6/45; the value at 0 is 1/2.
    """
    kappa = np.asarray(kappa, dtype=float)
    k2 = kappa * kappa
    small = np.abs(kappa) < 1e-3
    series = 1.0 / (2.0 - 2.0 * k2 / 3.0 + 4.0 * k2 * k2 / 45.0)
    s = np.sin(np.where(small, 1.0, kappa))
    direct = k2 / (2.0 * s * s)
    return np.where(small, series, direct)


@dataclass(frozen=True)
class FringeIntegrals:
    dirichlet: QuadResult
    dirichlet_exact: float
    cosine: QuadResult
    cosine_exact: float


def fringe_integral_exact(abs_tol: float | None = None) -> FringeIntegrals:
    """Quadrature of the two analytically known fringe integrals.

    int_{-pi/2}^{pi/2} kappa^2 / (1 - cos 2 kappa) = pi ln 2
    int_{-pi/2}^{pi/2} kappa^2 cos^2 kappa       = (pi/24)(pi^2 - 6)
    """
    h = 0.5 * math.pi
    first = integrate(dirichlet_kernel_weight, -h, h, abs_tol=abs_tol)
    second = integrate(lambda x: x * x * np.cos(x) ** 2, -h, h, abs_tol=abs_tol)
    return FringeIntegrals(first, math.pi * math.log(2), second,
                           math.pi / 24 * (math.pi**2 - 6))


def riemann_lebesgue(m: int, abs_tol: float | None = None) -> QuadResult:
    """int_{-pi/2}^{pi/2} kappa^2 / (1 - cos 2 kappa) * cos(2 m kappa); tends to 0."""
    h = 0.5 * math.pi
    return integrate(lambda x: dirichlet_kernel_weight(x) * np.cos(2 * m * x), -h, h,
                     abs_tol=abs_tol)


def product_form_coefficients(d: int, abs_tol: float = 1e-11) -> np.ndarray:
    """Cosine coefficients c_n, n = 0 .. 2^d, of 2^(d-1) prod_{j<d} cos(2^j kappa).

    c_n = (1/pi) int_{-pi}^{pi} F(kappa) cos(n kappa) d kappa for n >= 1 and
    half that for n = 0. They should be 1 for odd n < 2^d and 0 otherwise.
    """
    coeffs = []
    for n in range(2**d + 1):
        q = integrate(lambda x: _product_side(d, x) * np.cos(n * x), -math.pi, math.pi,
                      abs_tol=abs_tol)
        c = q.value / math.pi
        coeffs.append(c / 2 if n == 0 else c)
    return np.array(coeffs)
