"""Python bindings for the nodsis C++ library."""

from ._core import (
    AssumptionViolation,
    BranchLinkError,
    ConfigError,
    DomainError,
    Equilibrium,
    Error,
    IntegrationConfig,
    InvarianceViolation,
    ModelParams,
    NonConvergence,
    NotAnEquilibrium,
    ParameterError,
    RegimeError,
    Trajectory,
    __version__,
    basin_experiment,
    beta_star,
    f1,
    f2,
    find_beta0,
    find_equilibria,
    integrate,
    jacobian,
    network_run,
    parse_edge_list,
    presets,
    regime,
    run_config,
    sweep,
    urgency,
    vector_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
