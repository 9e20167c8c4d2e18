"""Constants, operators and numerical checks for weighted fractional Hardy-Rellich inequalities."""

from .fraclap import (
    LineFunction,
    RadialFracLap,
    VtFamily,
    fraclap_line,
    fraclap_radial,
    fraclap_vt,
    limit_t_zero,
    squared_difference_radial,
)
from .kernels import b_constant, fs_constant, kernel, phi_fs, psi
from .params import FracParams, ParameterError
from .quad import QuadResult, integrate, integrate_singular, integrate_tail
from .sharpness import SearchSpec, minimize, rayleigh_quotient
from .specfun import (
    ConstantReport,
    b_limit_s1,
    c_ns,
    classical_rellich_constant,
    fs_closed_p2,
    herbst_constant,
    lambda_closed,
    log_gamma,
    s_one_table,
    sphere_area,
)
from .testfns import DomainBall, RadialProfile, SmoothedComposite, bump, combo, compose_U, parse_profile, weighted_lp_ball
from .verify import (
    InequalityReport,
    PohozaevSpec,
    check_cordoba,
    check_fs_hardy_1d,
    check_hardy_rellich,
    check_hardy_rellich_p1,
    check_pohozaev_id,
    check_remainder_1d,
    gagliardo_1d,
)

__version__ = "0.1.0"

__all__ = [
    "LineFunction",
    "RadialFracLap",
    "VtFamily",
    "fraclap_line",
    "fraclap_radial",
    "fraclap_vt",
    "limit_t_zero",
    "squared_difference_radial",
    "ConstantReport",
    "b_limit_s1",
    "c_ns",
    "classical_rellich_constant",
    "fs_closed_p2",
    "herbst_constant",
    "lambda_closed",
    "log_gamma",
    "s_one_table",
    "sphere_area",
    "InequalityReport",
    "PohozaevSpec",
    "check_cordoba",
    "check_fs_hardy_1d",
    "check_hardy_rellich",
    "check_hardy_rellich_p1",
    "check_pohozaev_id",
    "check_remainder_1d",
    "gagliardo_1d",
    "b_constant",
    "fs_constant",
    "kernel",
    "phi_fs",
    "psi",
    "FracParams",
    "ParameterError",
    "QuadResult",
    "integrate",
    "integrate_singular",
    "integrate_tail",
    "SearchSpec",
    "minimize",
    "rayleigh_quotient",
    "DomainBall",
    "RadialProfile",
    "SmoothedComposite",
    "bump",
    "combo",
    "compose_U",
    "parse_profile",
    "weighted_lp_ball",
]
