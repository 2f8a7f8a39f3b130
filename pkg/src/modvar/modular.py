"""Eigenvalue functions of the modular position and momentum operators.

Every operator here is diagonal in either position or momentum, so it is
fully described by a real function of one variable:

    q_mod(x) + q_T(x) = x      q_mod in [0, T),     q_T in T*Z
    p_mod(k) + p_K(k) = k      p_mod in (-K/2, K/2], p_K in K*Z

The momentum side is shifted by half a period so that its jumps sit at
(j + 1/2) K, on the nodes of the m-slit fringe pattern. On a jump the
upper-edge value +K/2 is used.

The coarse part is computed first and the remainder is the difference, so
the remainder subtraction is exact (Sterbenz) and the two parts add back to
the argument bit for bit. The one exception is q_mod for -T/2 < x < 0,
where T + x is not generally representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "ModularSpec",
    "q_mod",
    "q_T",
    "p_mod",
    "p_K",
    "p_mod_refined",
    "refined_period",
    "p_mod_on_lattice",
]


@dataclass(frozen=True)
class ModularSpec:
    """Period of a modular operator and whether it carries the half shift."""

    period: float
    half_shift: bool

    def __post_init__(self):
        if not self.period > 0:
            raise ConfigError(f"period must be positive, got {self.period}")

    @classmethod
    def position(cls, T: float) -> "ModularSpec":
        return cls(T, False)

    @classmethod
    def momentum(cls, T: float, n: int = 1) -> "ModularSpec":
        """K = 2 pi / (n T); n = m/2 gives the refined period."""
        return cls(2 * math.pi / (n * T), True)

    def reduce(self, v):
        return p_mod(v, self.period) if self.half_shift else q_mod(v, self.period)

    def coarse(self, v):
        return p_K(v, self.period) if self.half_shift else q_T(v, self.period)


def _check_period(P):
    if not P > 0:
        raise ConfigError(f"period must be positive, got {P}")


def _floor_cells(x, T):
    x = np.asarray(x, dtype=float)
    j = np.floor(x / T)
    # one correction step for quotients rounded across a cell edge; the
    # tests compare cell edges with x directly, not the rounded remainder
    j = np.where(j * T > x, j - 1, np.where((j + 1) * T <= x, j + 1, j))
    return x, j


def q_T(x, T: float):
    """Coarse position T * floor(x / T)."""
    _check_period(T)
    x, j = _floor_cells(x, T)
    return j * T


def q_mod(x, T: float):
    """Non-negative remainder of x modulo T, in [0, T)."""
    _check_period(T)
    x, j = _floor_cells(x, T)
    r = x - j * T
    # T + x rounds up to T for tiny negative x; keep the half-open range
    return np.where(r >= T, np.nextafter(T, 0.0), r)


def _ceil_branches(k, K):
    k = np.asarray(k, dtype=float)
    j = np.ceil(k / K - 0.5)
    r = k - j * K
    half = 0.5 * K
    j = np.where(r > half, j + 1, np.where(r <= -half, j - 1, j))
    return k, j


def p_K(k, K: float):
    """Coarse momentum j K, with j the branch index of k."""
    _check_period(K)
    k, j = _ceil_branches(k, K)
    return j * K


def p_mod(k, K: float):
    """Sawtooth k - j K for k in ((j - 1/2) K, (j + 1/2) K]."""
    _check_period(K)
    k, j = _ceil_branches(k, K)
    return k - j * K


def refined_period(m: int, T: float) -> float:
    """K' = 4 pi / (m T), the node period of the m-slit pattern."""
    if m < 2 or m % 2:
        raise ConfigError(f"slit count must be even, got {m}")
    return 4 * math.pi / (m * T)


def p_mod_refined(k, m: int, T: float):
    """p_mod with the setup-adapted period K' = 4 pi / (m T)."""
    return p_mod(k, refined_period(m, T))


def p_mod_on_lattice(index, per_period: int, K: float):
    """p_mod at k = index * K / per_period, using integer branch arithmetic.

    On a lattice commensurate with K the jump points are exact lattice
    sites. Floating division can put such a site on either side of its jump;
    integer arithmetic keeps the upper-edge convention and exact
    K-periodicity in the index.
    """
    index = np.asarray(index, dtype=np.int64)
    r = np.mod(index, per_period)
    r = np.where(2 * r > per_period, r - per_period, r)
    return r * (K / per_period)
