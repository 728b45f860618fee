// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::params::{check_drive, SystemParams};
use crate::operator::{atomic_transition_op, cavity_annihilation, OperatorMatrix, ATOM_COUNT};
use crate::{Result, C64};

/// Atom-cavity exchange `g Σₘ (a|2⟩ₘ⟨1| + a†|1⟩ₘ⟨2|)`.
pub fn build_coupling(params: &SystemParams) -> Result<OperatorMatrix> {
    let space = params.space();
    let a = cavity_annihilation(space)?;
    let a_dag = a.adjoint();
    let mut h = OperatorMatrix::zeros(space);
    for m in 1..=ATOM_COUNT {
        h += &(&a * &atomic_transition_op(space, m, 2, 1)?);
        h += &(&a_dag * &atomic_transition_op(space, m, 1, 2)?);
    }
    Ok(h.scaled(params.g))
}

/// `H₀⁽ᵏ⁾ = Δₖ a†a + Δₖ Σₘ |2⟩ₘ⟨2| + g Σₘ (a|2⟩ₘ⟨1| + h.c.)`.
pub fn build_h0(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    let drive = params.drive(k)?;
    let space = params.space();
    let a = cavity_annihilation(space)?;
    let mut detuned = &a.adjoint() * &a;
    for m in 1..=ATOM_COUNT {
        detuned += &atomic_transition_op(space, m, 2, 2)?;
    }
    Ok(detuned.scaled(drive.delta) + build_coupling(params)?)
}

/// Collective raising operator `Σₘ |2⟩ₘ⟨q|` with `q` the drive's source level.
pub fn collective_raising(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    let drive = params.drive(k)?;
    let space = params.space();
    let q = drive.transition.source_level();
    let mut op = OperatorMatrix::zeros(space);
    for m in 1..=ATOM_COUNT {
        op += &atomic_transition_op(space, m, 2, q)?;
    }
    Ok(op)
}

/// `V₊⁽ᵏ⁾ = (Ωₖ/3) Σₘ |2⟩ₘ⟨q|`.
pub fn build_vplus(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    let omega = params.drive(k)?.omega;
    Ok(collective_raising(k, params)?.scaled(omega / 3.0))
}

/// `V₋⁽ᵏ⁾ = (V₊⁽ᵏ⁾)†`.
pub fn build_vminus(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    Ok(build_vplus(k, params)?.adjoint())
}

/// Full single-drive Hamiltonian `H⁽ᵏ⁾ = H₀⁽ᵏ⁾ + V₊⁽ᵏ⁾ + V₋⁽ᵏ⁾`.
pub fn build_hamiltonian(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    check_drive(k)?;
    let vplus = build_vplus(k, params)?;
    let vminus = vplus.adjoint();
    Ok(build_h0(k, params)? + vplus + vminus)
}

/// Dissipation channel identity, in the fixed list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelLabel {
    Cavity,
    /// Atom `m` decaying `|2⟩ → |0⟩`.
    ToZero(usize),
    /// Atom `m` decaying `|2⟩ → |1⟩`.
    ToOne(usize),
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelLabel::Cavity => write!(f, "kappa"),
            ChannelLabel::ToZero(m) => write!(f, "gamma0_{m}"),
            ChannelLabel::ToOne(m) => write!(f, "gamma1_{m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LindbladChannel {
    pub label: ChannelLabel,
    pub op: OperatorMatrix,
}

/// The seven jump operators, ordered
/// `[√κ a, √γ₀ |0⟩ₘ⟨2| (m = 1..3), √γ₁ |1⟩ₘ⟨2| (m = 1..3)]`.
pub fn build_lindblad_set(params: &SystemParams) -> Result<Vec<LindbladChannel>> {
    let space = params.space();
    let mut out = Vec::with_capacity(1 + 2 * ATOM_COUNT);
    out.push(LindbladChannel {
        label: ChannelLabel::Cavity,
        op: cavity_annihilation(space)?.scaled(params.kappa.sqrt()),
    });
    let g0 = params.gamma_to_zero().sqrt();
    for m in 1..=ATOM_COUNT {
        out.push(LindbladChannel {
            label: ChannelLabel::ToZero(m),
            op: atomic_transition_op(space, m, 0, 2)?.scaled(g0),
        });
    }
    let g1 = params.gamma_to_one().sqrt();
    for m in 1..=ATOM_COUNT {
        out.push(LindbladChannel {
            label: ChannelLabel::ToOne(m),
            op: atomic_transition_op(space, m, 1, 2)?.scaled(g1),
        });
    }
    Ok(out)
}

/// `Σₓ Lₓ† Lₓ`.
pub fn lindblad_sum(channels: &[LindbladChannel]) -> OperatorMatrix {
    let space = channels[0].op.space();
    channels
        .iter()
        .fold(OperatorMatrix::zeros(space), |mut acc, ch| {
            acc += &(&ch.op.adjoint() * &ch.op);
            acc
        })
}

/// `H_NH = H₀⁽ᵏ⁾ − (i/2) Σₓ Lₓ† Lₓ`.
pub fn build_nonhermitian_full(k: usize, params: &SystemParams) -> Result<OperatorMatrix> {
    let channels = build_lindblad_set(params)?;
    Ok(build_h0(k, params)? - lindblad_sum(&channels).scaled(C64::new(0.0, 0.5)))
}
