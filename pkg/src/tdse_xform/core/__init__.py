from . import expr
from .calculus import (
    antiderivative,
    cumulative_simpson_along,
    diff_array,
    diff_t,
    diff_x,
    fd_weights,
    simpson_from,
    unwrap_log,
)
from .grid import ComplexField, SpaceTimeField, SpatialGrid, TimeAxis, mesh, sample
from .parse import parse_expr
from .timefunc import (
    AnalyticTime,
    GenericTime,
    SampledTime,
    TimeFunction,
    analytic,
    constant,
    cumulative_integral,
    exp_integral,
    integral_of,
    power_of,
    quotient,
    scaled,
)

__all__ = [
    "AnalyticTime",
    "ComplexField",
    "GenericTime",
    "SampledTime",
    "SpaceTimeField",
    "SpatialGrid",
    "TimeAxis",
    "TimeFunction",
    "analytic",
    "antiderivative",
    "constant",
    "cumulative_integral",
    "cumulative_simpson_along",
    "diff_array",
    "diff_t",
    "diff_x",
    "exp_integral",
    "fd_weights",
    "expr",
    "integral_of",
    "mesh",
    "parse_expr",
    "power_of",
    "quotient",
    "sample",
    "scaled",
    "simpson_from",
    "unwrap_log",
]
