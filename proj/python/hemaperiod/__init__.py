from ._core import (
    Model,
    ModelError,
    PeriodicOrbit,
    alpha,
    beta,
    check_existence,
    check_multiplicity,
    equilibrium_model,
    find_all_orbits,
    integrate,
    load_model,
    parse_model,
    phi,
    predicted_solutions,
    pure_decay_model,
    run_cli,
    scan_envelopes,
    six_orbit_model,
    solve_orbit,
    synthesize,
    validate_orbit,
)

__all__ = [name for name in dir() if not name.startswith("_")]
