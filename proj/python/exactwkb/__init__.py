"""Exact-WKB spectral solver for monic polynomial potentials."""

from ._core import (
    CheckResult,
    CompoundSpectrum,
    Potential,
    SolveReport,
    SolverConfig,
    SolverError,
    Spectrum,
    WavefunctionSample,
    conjugate,
    homogeneous_action,
    quartic,
    quartic_action,
    read_records,
    recessive_solution,
    regularized_action,
    run_checks,
    shoot_levels,
    solve,
    solve_homogeneous,
    wavefunction,
    wronskian_residual,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
