"""Multi-term time-fractional diffusion on the unit interval and square.

Thin wrapper over the C++ core: Mittag-Leffler evaluation, per-mode solution
factors, semidiscrete and fully discrete solves of the catalogued cases, and
the convergence studies with their CSV table format.
"""

from ._core import (
    ConvergenceReport,
    LadderPoint,
    NumericalError,
    Orders,
    __version__,
    blowup,
    caputo_l1,
    case_names,
    config_hash,
    converge_space,
    converge_time,
    emit_table,
    estimate_rate,
    l1_weights,
    mml_contour,
    mml_series,
    mml_value,
    parse_table,
    primitive,
    relaxation,
    response,
    solve_fully_discrete,
    solve_semidiscrete,
    worker_count,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
