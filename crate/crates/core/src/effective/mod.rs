// SPDX-License-Identifier: Apache-2.0

//! Adiabatic elimination of the singly excited manifold. Each drive gives an
//! effective Hamiltonian and seven effective jump operators on the eight
//! ground states; their squared matrix elements summed over drives form the
//! rate matrix used by the population dynamics.

mod block;
mod closed_form;
mod operators;
mod rates;

pub use block::{
    build_nonhermitian, invert_excited_block, NonHermitianBlock, CONDITION_LIMIT,
    INVERSION_RESIDUAL_LIMIT,
};
pub use closed_form::{
    closed_form_rate, closed_form_rate_with, compare_closed_forms, group_of, shelf_amplitude,
    ComparisonReport, ComparisonRow, MatchStatus, Reading, CLOSED_FORM_TOLERANCE, COVERED_PAIRS,
    PAIR_SYMMETRY_TOLERANCE,
};
pub use operators::{
    effective_hamiltonian, effective_lindblads, effective_model, effective_models, numeric_rate,
    EffectiveChannel, EffectiveModel,
};
pub use rates::{assemble_rate_matrix, drive_rate_matrix, RateMatrix};
