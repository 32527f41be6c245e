"""Pullback attractors of scalar parabolic problems over compact hull flows.

Thin wrapper around the C++ core. The heavy lifting (quadrature, IMEX
stepping, pullback ladders) lives in the `_attractorlab` extension, which
sits inside the package in an installed wheel and next to it in a build
tree.
"""

try:
    from . import _attractorlab as _core  # installed wheel layout
except ImportError:  # build-tree layout: extension on sys.path
    import _attractorlab as _core

import sys as _sys

_sys.modules.setdefault("_attractorlab", _core)

from _attractorlab import (  # noqa: F401,E402
    AttractorSection,
    BoundaryKind,
    DriverSpec,
    FieldState,
    Grid,
    HullPoint,
    LinearCoefficientSpec,
    LyapunovEstimate,
    NonlinearitySpec,
    ProblemSetup,
    PullbackOptions,
    ScalarAttractor,
    ScalarProblem,
    ScalarTrajectory,
    SectionClass,
    SpectralInterval,
    TailIntegralResult,
    advance,
    closed_form_v,
    entire_solution_w0,
    evaluate,
    evolve,
    evolve_linear,
    integrability_criterion,
    integrate_scalar,
    is_asymptotic_at_minus_infinity,
    limit_points,
    log_cocycle,
    lyapunov,
    pde_cocycle,
    principal_eigenpair,
    pullback_boundary,
    pullback_bstar,
    pullback_section,
    run_scenario_file,
    spectrum_estimate,
    tail_integral,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
