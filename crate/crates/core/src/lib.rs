// SPDX-License-Identifier: Apache-2.0

//! Simulation of dissipative W-state preparation for three Λ atoms in a
//! single-mode lossy cavity.
//!
//! The crate is layered bottom-up:
//!
//! - [`operator`]: Hilbert-space bookkeeping and dense complex operators on
//!   the 3 atoms ⊗ truncated Fock space.
//! - [`model`]: per-drive Hamiltonians and jump operators, plus the Fourier
//!   ground basis.
//! - [`effective`]: adiabatic elimination of the single-excitation manifold
//!   down to an 8×8 rate matrix, checked against closed forms.
//! - [`dynamics`]: rate equations and Lindblad propagation.
//! - [`analysis`]: configured runs and sweeps behind the command-line tool.
//!
//! All frequencies are in units of the atom-cavity coupling `g` and all times
//! in units of `1/g`.

pub mod analysis;
pub mod dynamics;
pub mod effective;
mod error;
pub mod model;
pub mod operator;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
