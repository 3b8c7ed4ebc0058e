"""Pseudo-spectral torus solver for the isothermal capillary Navier-Stokes
system, with entropy and stability diagnostics.

Everything lives in the compiled core; this package just re-exports it.
"""

from ._core import (  # noqa: F401
    Checkpoint,
    DiagnosticsRecord,
    EnergyBudget,
    Grid,
    GronwallReport,
    InitSpec,
    Integrator,
    LemmaReport,
    PressureLaw,
    RunConfig,
    RunResult,
    SimConfig,
    State,
    StressModel,
    Trajectory,
    VanishCase,
    VanishReport,
    WeakStrongCase,
    WeakStrongReport,
    __version__,
    cq_constant,
    diagnostics_csv,
    emit_run_outputs,
    emit_vanish_outputs,
    emit_weak_strong_outputs,
    energy,
    lemma_lines,
    lemma_suite,
    make_initial,
    make_state,
    manifest_text,
    parse_config,
    parse_config_text,
    pressure_bound_constant,
    read_checkpoint,
    relative_entropy,
    run_single,
    run_vanish_regularization,
    run_weak_strong,
    velocity,
    write_checkpoint,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
