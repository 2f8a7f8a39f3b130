"""Modular-variable uncertainty relations for multislit interferometry."""

__version__ = "0.1.0"

from .aperture import (  # noqa: E402
    MomentumEvaluator,
    PositionState,
    SlitConfig,
    build_position_state,
    eval_momentum_product,
    eval_momentum_sum,
    f_m,
    is_admissible,
)
from .errors import ConfigError, FitError, GridError, ModvarError, QuadratureError  # noqa: E402
from .modular import p_K, p_mod, p_mod_refined, q_mod, q_T  # noqa: E402
from .moments import (  # noqa: E402
    MomentReport,
    SweepRow,
    fit_asymptote,
    sdev_pmod_bruteforce,
    sdev_pmod_refined,
    sdev_pmod_single_fringe,
    sdev_qt,
    sweep,
    uncertainty_product,
)
from .quadrature import QuadResult, integrate  # noqa: E402
