// SPDX-License-Identifier: Apache-2.0

//! The physical model: presets and the per-drive Hamiltonians with their
//! dissipation channels. The Fourier ground basis lives here too.

mod basis;
mod hamiltonian;
mod params;
mod weak_field;

pub use basis::{ground_basis, GroundBasis, GroundState};
pub use hamiltonian::{
    build_coupling, build_h0, build_hamiltonian, build_lindblad_set, build_nonhermitian_full,
    build_vminus, build_vplus, collective_raising, lindblad_sum, ChannelLabel, LindbladChannel,
};
pub(crate) use params::check_drive;
pub use params::{
    derived_quantities, fig2_deltas, fig2_omegas, DerivedQuantities, DriveSpec, SystemParams,
    Transition, DEGENERACY_THRESHOLD, DRIVE_COUNT, PRESET_NAMES,
};
pub use weak_field::{check_weak_field, WeakFieldPair, WeakFieldReport, WEAK_FIELD_FLAG_RATIO};
