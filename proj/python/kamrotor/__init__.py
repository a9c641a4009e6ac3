"""Double-pulse kicked rotor: classical maps, density-matrix dynamics and
toroidal Wigner functions."""

from ._core import (
    Backend,
    ConfigError,
    KamrotorError,
    SimParams,
    StatisticsError,
    __version__,
    apply_decoherence,
    build_hamiltonians,
    cantorus_flux,
    chirikov_overlap,
    classical_transport,
    continued_fraction,
    evolve_density,
    floquet_operator,
    fourier_coefficient,
    fraction_outside_quantum,
    kick_cycle,
    parse_config,
    physical_to_scaled,
    pulse_train,
    resonance_width,
    run_quantum,
    run_scenario,
    scenario_names,
    thermal_state,
    wigner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
