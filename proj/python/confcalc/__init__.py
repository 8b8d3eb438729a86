"""Conformable derivative and integral of vector-valued functions."""

from ._core import (
    AlgebraError,
    ConvergenceError,
    DomainError,
    Error,
    Function,
    LowerTerminalError,
    ParameterError,
    ParseError,
    QuadratureError,
    ShapeError,
    avg_recover,
    builtin,
    builtin_names,
    callable,
    cli,
    conf_deriv,
    conf_deriv_scaled,
    conf_integral,
    convert_order,
    diag,
    expr,
    grid,
    identities,
    linear_combination,
    lower_terminal_deriv,
    product,
    quotient,
    run_suite,
    samples,
    solve_ivp,
    vector,
    with_point_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
