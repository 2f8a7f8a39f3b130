"""Discretised commutator experiments on sampled wavefunctions.

Q acts in momentum space as i d/dk. P_mod multiplies by a sawtooth with
jumps at (j + 1/2) K, so P_mod psi_hat is only piecewise smooth. Its
derivative is taken branch by branch with local fourth-order stencils, and
each jump is added as a discrete delta of weight (jump / dk) on its node.
That is the distributional derivative: an admissible state (psi_hat = 0 on
the jumps) picks up nothing, any other state picks up a comb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import modular
from .aperture import MomentumEvaluator, SlitConfig, build_position_state
from .errors import GridError

__all__ = [
    "GridState",
    "ResidualReport",
    "commensurate_grid",
    "sample_momentum",
    "derivative",
    "apply_q",
    "canonical_residual",
    "commuting_residual",
    "EDGE_BAND",
]

EDGE_BAND = 4
_COMMENSURATE_RTOL = 1e-9


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GridState:
    """psi_hat sampled at n_points uniform nodes from k_min to k_max inclusive."""

    k_min: float
    k_max: float
    n_points: int
    samples: np.ndarray

    def __post_init__(self):
        if self.n_points < 2 or not self.k_max > self.k_min:
            raise GridError("grid needs k_max > k_min and at least two points")
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.n_points,):
            raise GridError(f"expected {self.n_points} samples, got {samples.shape}")
        object.__setattr__(self, "samples", _frozen(samples))

    @property
    def dk(self) -> float:
        return (self.k_max - self.k_min) / (self.n_points - 1)

    @property
    def k(self) -> np.ndarray:
        return self.k_min + self.dk * np.arange(self.n_points)

    def norm(self) -> float:
        """Discrete L2 norm (rectangle rule)."""
        return math.sqrt(float(np.sum(np.abs(self.samples) ** 2)) * self.dk)

    def with_samples(self, samples) -> "GridState":
        return GridState(self.k_min, self.k_max, self.n_points, samples)


def commensurate_grid(K: float, per_period: int, periods: int):
    """Grid parameters (k_min, k_max, n_points) covering [-periods K, periods K].

    The spacing is K / per_period, so with even ``per_period`` every point
    (j + 1/2) K of the range is a node.
    """
    if per_period < 2 or per_period % 2:
        raise GridError("per_period must be even and >= 2")
    if periods < 1:
        raise GridError("periods must be >= 1")
    return -periods * K, periods * K, 2 * periods * per_period + 1


def sample_momentum(source, k_min: float, k_max: float, n_points: int,
                    shift: float = 0.0, min_lobes: int = 20,
                    max_spacing: float | None = None) -> GridState:
    """Sample the closed-form psi_hat(k - shift) on a uniform grid.

    ``source`` is a SlitConfig or a MomentumEvaluator. The range must span
    at least ``min_lobes`` lobes (width 2 pi / a) of the sinc envelope, and
    the spacing must not exceed ``max_spacing`` (default K/64).
    """
    ev = source if isinstance(source, MomentumEvaluator) else MomentumEvaluator(source)
    cfg = ev.config
    if n_points < 2 or not k_max > k_min:
        raise GridError("grid needs k_max > k_min and at least two points")
    dk = (k_max - k_min) / (n_points - 1)
    limit = cfg.K / 64 if max_spacing is None else max_spacing
    if dk > limit * (1 + 1e-12):
        raise GridError(f"under-resolved grid: dk={dk:.4g} exceeds {limit:.4g}")
    lobe = 2 * math.pi / cfg.slit_width_a
    if (k_max - k_min) < min_lobes * lobe * (1 - 1e-12):
        raise GridError(
            f"k range {k_max - k_min:.4g} covers fewer than {min_lobes} envelope lobes"
        )
    k = k_min + dk * np.arange(n_points)
    return GridState(k_min, k_max, n_points, ev(k - shift).astype(complex))


def derivative(values, h: float):
    """Fourth-order finite-difference derivative; one-sided at the two end points."""
    f = np.asarray(values)
    n = f.shape[0]
    if n < 5:
        raise GridError("need at least 5 points for the fourth-order stencil")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


def apply_q(state: GridState) -> GridState:
    """Position operator in momentum space, i d/dk."""
    return state.with_samples(1j * derivative(state.samples, state.dk))


@dataclass(frozen=True)
class ResidualReport:
    l2_residual: float
    residual_profile: np.ndarray
    comb_locations: np.ndarray
    comb_alignment_score: float
    k: np.ndarray

    def as_dict(self):
        return {
            "l2_residual": self.l2_residual,
            "comb_alignment_score": self.comb_alignment_score,
            "comb_count": int(self.comb_locations.size),
            "comb_locations_min": float(self.comb_locations.min()) if self.comb_locations.size else None,
            "comb_locations_max": float(self.comb_locations.max()) if self.comb_locations.size else None,
            "max_abs_residual": float(np.max(self.residual_profile)),
        }


def _lattice_index(state: GridState, K: float):
    """(points per period, index of k_min) if the grid is commensurate with K."""
    dk = state.dk
    ratio = K / dk
    N = int(round(ratio))
    if N < 4 or abs(ratio - N) > _COMMENSURATE_RTOL * ratio:
        raise GridError(f"incommensurate grid: K/dk = {ratio:.12g} is not an integer")
    if N % 2:
        raise GridError(f"K/dk = {N} is odd; the jump points (j + 1/2) K miss the grid")
    off = state.k_min / dk
    idx0 = int(round(off))
    if abs(off - idx0) > _COMMENSURATE_RTOL * max(1.0, abs(off)):
        raise GridError("incommensurate grid: k_min is not a multiple of dk")
    return N, idx0


def canonical_residual(state: GridState, K: float) -> ResidualReport:
    """Residual of [Q, P_mod] psi_hat = i psi_hat on a grid commensurate with K.

    r = Q(P_mod psi_hat) - P_mod (Q psi_hat) - i psi_hat. The reported
    ``l2_residual`` is ||r|| / ||psi_hat|| over the grid without an edge band
    of EDGE_BAND points; ``comb_alignment_score`` is the share of |r|^2 within
    two points of a jump (j + 1/2) K.
    """
    N, idx0 = _lattice_index(state, K)
    n = state.n_points
    psi = np.asarray(state.samples)
    g = idx0 + np.arange(n)  # global lattice index, k = g * dk
    p = modular.p_mod_on_lattice(g, N, K)

    jumps = np.nonzero(np.mod(g - N // 2, N) == 0)[0]
    bounds = sorted(set([0, n - 1, *jumps.tolist()]))
    dk = state.dk
    step = K / N

    dpsi_p = np.empty(n, dtype=complex)
    prev_tail = None
    for s, e in zip(bounds[:-1], bounds[1:]):
        if e - s + 1 < 5:
            raise GridError("a sawtooth branch has fewer than 5 grid points")
        mid = g[(s + e) // 2]
        r = int(np.mod(mid, N))
        centre = mid - (r - N if 2 * r > N else r)
        seg = (g[s:e + 1] - centre) * step * psi[s:e + 1]
        dseg = derivative(seg, dk)
        if prev_tail is None:
            dpsi_p[s:e + 1] = dseg
        else:
            # node s keeps the left branch (p = +K/2) and gains the jump
            dpsi_p[s + 1:e + 1] = dseg[1:]
            dpsi_p[s] += (seg[0] - prev_tail) / dk
        prev_tail = seg[-1]

    residual = 1j * dpsi_p - p * (1j * derivative(psi, dk)) - 1j * psi
    inner = slice(EDGE_BAND, n - EDGE_BAND)
    r2 = np.abs(residual[inner]) ** 2
    l2 = math.sqrt(float(np.sum(r2)) / float(np.sum(np.abs(psi[inner]) ** 2)))

    near = np.zeros(n, dtype=bool)
    for off in range(-2, 3):
        idx = jumps + off
        near[idx[(idx >= 0) & (idx < n)]] = True
    total = float(np.sum(r2))
    score = float(np.sum(r2[near[inner]]) / total) if total > 0 else 0.0
    k = state.k
    return ResidualReport(l2, _frozen(np.abs(residual)), _frozen(k[jumps]), score, _frozen(k))


def commuting_residual(config: SlitConfig, periods: int = 16, n_points: int = 2**14,
                       contrast: bool = False) -> float:
    """Relative L2 size of [Q_mod, P_mod] psi_m on a periodic position grid.

    The box has length L = periods * T and n_points samples at cell centres,
    so the conjugate spacing is 2 pi / L = K / periods. P_mod is applied by
    FFT. ``contrast=True`` uses the unbounded Q (x itself) in place of Q_mod.
    """
    if periods < 1 or n_points % periods:
        raise GridError("n_points must be a positive multiple of the number of periods")
    T = config.separation_T
    state = build_position_state(config)
    L = periods * T
    if state.rectangles[-1].hi > 0.5 * L:
        raise GridError("aperture does not fit in the periodic box")
    dx = L / n_points
    x = -0.5 * L + (np.arange(n_points) + 0.5) * dx
    psi = state(x).astype(complex)
    q = x if contrast else modular.q_mod(x, T)
    idx = np.rint(np.fft.fftfreq(n_points) * n_points).astype(np.int64)
    p = modular.p_mod_on_lattice(idx, periods, config.K)

    def pmod(f):
        return np.fft.ifft(p * np.fft.fft(f))

    diff = pmod(q * psi) - q * pmod(psi)
    return float(np.linalg.norm(diff) / np.linalg.norm(psi))
