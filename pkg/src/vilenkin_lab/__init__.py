"""Numerical lab for Fejér summability on bounded Vilenkin groups and the circle."""

from .group import (
    CellSet,
    DigitExpansion,
    GroupSpec,
    Point,
    add,
    annulus_cells,
    annulus_partition,
    build_spec,
    cylinder,
    digits,
    index_of,
    point_from_index,
    sub,
    unit_point,
)
from .transform import (
    Spectrum,
    StepFunction,
    forward,
    integrate,
    inverse,
    lp_norm,
    naive_forward,
    psi,
    rademacher,
)
from .kernels import (
    convolve,
    dirichlet,
    domination_rhs,
    fejer,
    fejer_closed_at,
    fejer_closed_table,
    fejer_mean,
    maximal_fejer,
    partial_sum,
    restricted_maximal_kernel,
)
from .trig import GridFunction, envelope_T, fejer_kernel_T, fejer_mean_T, tail_report

__all__ = [
    "CellSet",
    "DigitExpansion",
    "GridFunction",
    "GroupSpec",
    "Point",
    "Spectrum",
    "StepFunction",
    "add",
    "annulus_cells",
    "annulus_partition",
    "build_spec",
    "convolve",
    "cylinder",
    "digits",
    "dirichlet",
    "domination_rhs",
    "envelope_T",
    "fejer",
    "fejer_closed_at",
    "fejer_closed_table",
    "fejer_kernel_T",
    "fejer_mean",
    "fejer_mean_T",
    "forward",
    "index_of",
    "integrate",
    "inverse",
    "tail_report",
    "lp_norm",
    "maximal_fejer",
    "naive_forward",
    "partial_sum",
    "point_from_index",
    "psi",
    "rademacher",
    "restricted_maximal_kernel",
    "sub",
    "unit_point",
]

__version__ = "0.1.0"
