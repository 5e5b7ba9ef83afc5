"""Bi-cyclide coordinates, eigenfunctions, harmonics and expansions."""

from .coords import (
    BiCyclidePoint,
    Cartesian,
    Cylindrical,
    axis_map,
    chi,
    chi_from_cylindrical,
    cyclide_polys,
    cyclide_polys_factored,
    from_cartesian,
    inversion_M,
    kelvin_point,
    metric_h,
    moon_spencer_convert,
    to_cartesian,
    to_cylindrical,
)
from .elliptic import (
    Modulus,
    complete_integrals,
    glaisher,
    inverse_sn,
    jacobi,
    landen_descend,
    landen_identities,
)
from .errors import (
    BicyclideError,
    ConvergenceError,
    DomainError,
    PreconditionError,
    SingularityError,
)
from .greens import (
    DirichletCoefficients,
    SeriesResult,
    addition_series,
    azimuthal_fourier,
    dirichlet_coefficients,
    dirichlet_solve,
    direct_distance,
    expand_distance,
    external_from_integral,
    integral_relation,
)
from .harmonics import HarmonicIndex, eval_harmonic, kelvin_transform
from .legendre import ferrers_P, legendre_PQ, toroidal_Q, toroidal_Q_all
from .limits import (
    LimitTermSpec,
    bicyclide_A,
    bispherical_B,
    bispherical_point,
    limit_profile_check,
    prolate_B,
    prolate_point,
)
from .wangerin import (
    EigenSolution,
    eval_edge_profile,
    eval_interior,
    solve_eigen,
    wronskian_w,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
