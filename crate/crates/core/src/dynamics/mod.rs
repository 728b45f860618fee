// SPDX-License-Identifier: Apache-2.0

//! Time evolution, either as rate equations on the eight ground states or as
//! the Lindblad equation on the full atom-cavity space (including the
//! four-drive time-dependent model).

mod composite;
mod initial;
mod master;
mod methods;
mod population;
mod rate;
mod schedule;
mod trajectory;

pub use composite::{build_composite_hamiltonian, CompositeHamiltonian};
pub use initial::InitialState;
pub use master::{
    integrate_master, MasterStats, StaticHamiltonian, TimeDependentHamiltonian, POSITIVITY_FLOOR,
};
pub use methods::{
    extract_full_independent_rates, simulate, simulate_effective_master, simulate_full_independent,
    simulate_full_time_dependent, simulate_rate, Simulation, DEFAULT_MASTER_DT, DEFAULT_RATE_DT,
    FULL_INDEPENDENT_WINDOW,
};
pub use population::{
    metrics, Metrics, PopulationVector, FIDELITY_IMAGINARY_LIMIT, POPULATION_CLAMP,
    POPULATION_SUM_TOLERANCE,
};
pub use rate::{
    integrate_rate, rate_steady_state, KERNEL_TOLERANCE, RATE_STEP_LIMIT, STEADY_RESIDUAL_LIMIT,
};
pub use schedule::Sampling;
pub use trajectory::{Method, Trajectory, TRAJECTORY_HEADER};
