"""Numerical toolkit for the coefficient problem of nonvanishing bounded functions.

Submodules
----------
series
    Truncated power series arithmetic.
covering
    Covering maps of the punctured disk and annuli, zero counting, certificates.
schwarzian
    Schwarzian derivatives, B-norms, Ahlfors-Weill field.
extremal
    Coefficient functionals and the multi-start maximiser.
sigma_koebe
    Disk/exterior coefficient exchange and covering radii.
hsz
    Hardy-space candidate and norms.
"""

from __future__ import annotations

from .covering import (
    AnnulusSpec,
    CoveringMap,
    alpha,
    alpha_by_density,
    certify_unit_ball_member,
    count_zeros,
    covering,
    covering_function,
    is_selfmap,
    kappa0,
    kappa_rho,
    subordinate,
)
from .errors import (
    IndexBeyondOrder,
    InvalidModulus,
    KrzyzLabError,
    NearZeroConstantTerm,
    NonzeroInnerConstant,
    NormTooLarge,
    NotSelfMap,
    ZeroOnContour,
)
from .extremal import (
    Functional,
    Herglotz,
    HerglotzParams,
    OptimizationReport,
    Subordination,
    SubordinationParams,
    build_herglotz,
    canonical_rotation,
    functional_cn,
    functional_In,
    kappa0_power,
    maximize,
    parseval_check,
    rotate,
)
from .hsz import HpSpec, hp_means, hp_norm, hsz_bound_check, hsz_candidate, n1_sweep
from .schwarzian import aw_beltrami, b_norm, schwarzian, truncation_gap
from .series import TruncatedSeries, compose, div, exp, log
from .sigma_koebe import (
    SigmaNormalizedMap,
    SNormalizedMap,
    cover_estimate,
    covered_radius,
    koebe,
    s_to_sigma,
    sigma_boundary,
    sigma_boundary_check,
    sigma_to_s,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
