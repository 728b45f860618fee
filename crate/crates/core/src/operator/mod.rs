// SPDX-License-Identifier: Apache-2.0

//! Hilbert-space bookkeeping and complex operator algebra for three
//! three-level atoms tensored with a truncated cavity Fock space.

mod matrix;
mod space;
mod sparse;
mod state;

pub use matrix::{
    atomic_transition_op, cavity_annihilation, excitation_number, kron, max_modulus,
    tensor_product, OperatorMatrix,
};
pub use space::{BasisLabel, HilbertSpace, ATOM_COUNT, ATOM_LEVELS, DEFAULT_N_MAX};
pub use sparse::SparseOperator;
pub(crate) use state::{hermiticity_deviation, min_eigenvalue};
pub use state::{
    DensityMatrix, StateVector, EIGENVALUE_FLOOR, HERMITICITY_TOLERANCE, TRACE_TOLERANCE,
};
