// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use super::block::{build_nonhermitian, invert_excited_block, NonHermitianBlock};
use super::rates::RateMatrix;
use crate::model::{
    build_lindblad_set, build_vplus, ground_basis, ChannelLabel, GroundState, SystemParams,
};
use crate::{Error, Result, C64};

/// One effective jump operator `L_eff = L H_NH⁻¹ V₊`, as an 8×8 matrix in
/// ground-basis order.
#[derive(Debug, Clone)]
pub struct EffectiveChannel {
    pub label: ChannelLabel,
    pub op: DMatrix<C64>,
}

/// Effective generator for one drive on the ground manifold.
#[derive(Debug, Clone)]
pub struct EffectiveModel {
    pub k: usize,
    /// Hermitian 8×8 effective Hamiltonian.
    pub h_eff: DMatrix<C64>,
    pub l_eff: Vec<EffectiveChannel>,
}

impl EffectiveModel {
    /// `Σₓ |⟨to|L_eff,x|from⟩|²`; zero when `from == to`.
    pub fn rate(&self, from: GroundState, to: GroundState) -> f64 {
        if from == to {
            return 0.0;
        }
        self.l_eff
            .iter()
            .map(|ch| ch.op[(to.index(), from.index())].norm_sqr())
            .sum()
    }

    pub fn rate_matrix(&self) -> RateMatrix {
        RateMatrix::from_fn(|from, to| self.rate(from, to))
    }

    /// Largest off-diagonal modulus of `h_eff`.
    pub fn hamiltonian_offdiagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..8 {
            for c in 0..8 {
                if r != c {
                    worst = worst.max(self.h_eff[(r, c)].norm());
                }
            }
        }
        worst
    }
}

/// Everything needed to project onto the ground manifold for one drive.
struct Reduction {
    nh: NonHermitianBlock,
    /// `⟨e|V₊|y⟩`, excited rows × ground-basis columns.
    coupling: DMatrix<C64>,
    /// Ground isometry, `total_dim × 8`.
    ground: DMatrix<C64>,
}

fn reduce(k: usize, params: &SystemParams) -> Result<Reduction> {
    let nh = invert_excited_block(build_nonhermitian(k, params)?)?;
    let ground = ground_basis(params.space()).isometry();
    let raised = build_vplus(k, params)?.entries() * &ground;

    // V₊ must map the ground manifold into N_exc = 1 only.
    let mut outside = 0.0f64;
    let mut it = nh.excited_indices.iter().peekable();
    for r in 0..raised.nrows() {
        if it.peek() == Some(&&r) {
            it.next();
            continue;
        }
        for c in 0..8 {
            outside = outside.max(raised[(r, c)].norm());
        }
    }
    if outside > 0.0 {
        return Err(Error::invalid(format!(
            "V+ for drive {k} leaves the single-excitation manifold (|amp| = {outside:e})"
        )));
    }
    let e = &nh.excited_indices;
    let coupling = DMatrix::from_fn(e.len(), 8, |r, c| raised[(e[r], c)]);
    Ok(Reduction {
        nh,
        coupling,
        ground,
    })
}

impl Reduction {
    fn inverse(&self) -> &DMatrix<C64> {
        self.nh.inverse().expect("reduction always inverts")
    }

    fn hamiltonian(&self) -> DMatrix<C64> {
        let inv = self.inverse();
        let sym = inv + inv.adjoint();
        let h = (self.coupling.adjoint() * sym * &self.coupling) * C64::new(-0.5, 0.0);
        (&h + h.adjoint()) * C64::new(0.5, 0.0)
    }

    fn lindblads(&self, params: &SystemParams) -> Result<Vec<EffectiveChannel>> {
        let e = &self.nh.excited_indices;
        let propagated = self.inverse() * &self.coupling;
        build_lindblad_set(params)?
            .into_iter()
            .map(|ch| {
                let columns = DMatrix::from_fn(ch.op.dim(), e.len(), |r, c| ch.op.get(r, e[c]));
                let op = self.ground.adjoint() * columns * &propagated;
                Ok(EffectiveChannel {
                    label: ch.label,
                    op,
                })
            })
            .collect()
    }
}

/// `H_eff,k = −½ V₋ (H_NH⁻¹ + (H_NH⁻¹)†) V₊` in the ground basis.
pub fn effective_hamiltonian(k: usize, params: &SystemParams) -> Result<DMatrix<C64>> {
    Ok(reduce(k, params)?.hamiltonian())
}

/// `L_eff,k^x = Lₓ H_NH⁻¹ V₊` for the seven channels, in the ground basis.
pub fn effective_lindblads(k: usize, params: &SystemParams) -> Result<Vec<EffectiveChannel>> {
    reduce(k, params)?.lindblads(params)
}

pub fn effective_model(k: usize, params: &SystemParams) -> Result<EffectiveModel> {
    let red = reduce(k, params)?;
    Ok(EffectiveModel {
        k,
        h_eff: red.hamiltonian(),
        l_eff: red.lindblads(params)?,
    })
}

/// Effective models for all four drives.
pub fn effective_models(params: &SystemParams) -> Result<Vec<EffectiveModel>> {
    (1..=crate::model::DRIVE_COUNT)
        .map(|k| effective_model(k, params))
        .collect()
}

/// Rate `from → to` induced by drive `k`.
pub fn numeric_rate(
    from: GroundState,
    to: GroundState,
    k: usize,
    params: &SystemParams,
) -> Result<f64> {
    Ok(effective_model(k, params)?.rate(from, to))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::derived_quantities;
    use crate::model::GroundState as G;
    use crate::operator::max_modulus;

    fn fig2() -> SystemParams {
        SystemParams::fig2(0.04)
    }

    #[test]
    fn h_eff_is_hermitian_and_diagonal_at_operating_point() {
        let p = fig2();
        for k in 1..=4 {
            let m = effective_model(k, &p).unwrap();
            assert_eq!(m.h_eff, m.h_eff.adjoint());
            assert!(m.hamiltonian_offdiagonal() < 1e-8);
            assert_eq!(m.l_eff.len(), 7);
        }
    }

    #[test]
    fn h_eff_diagonal_matches_sector_inverse() {
        // The defining formula gives −Re[δ̃Ω²/(3R̃)] on |000⟩ (k = 1) and on |111⟩ (k = 3).
        let p = SystemParams {
            deltas: [0.4, 1.0, 3f64.sqrt(), 2f64.sqrt()],
            ..fig2()
        };
        let dq = derived_quantities(&p).unwrap();
        let h1 = effective_hamiltonian(1, &p).unwrap();
        let want1 = -(dq.small(1) * p.omegas[0].powi(2) / (dq.r(1, 1) * 3.0)).re;
        assert!((h1[(0, 0)].re - want1).abs() < 1e-12 * want1.abs().max(1e-6));
        let h3 = effective_hamiltonian(3, &p).unwrap();
        let want3 = -(dq.small(3) * p.omegas[2].powi(2) / (dq.r(3, 3) * 3.0)).re;
        assert!((h3[(7, 7)].re - want3).abs() < 1e-12 * want3.abs());
        assert!(want3.abs() > 1e-6);
    }

    #[test]
    fn undriven_effective_operators_vanish() {
        let p = SystemParams {
            omegas: [0.0; 4],
            ..fig2()
        };
        for k in 1..=4 {
            let m = effective_model(k, &p).unwrap();
            assert_eq!(max_modulus(&m.h_eff), 0.0);
            assert!(m.l_eff.iter().all(|ch| max_modulus(&ch.op) == 0.0));
        }
    }

    #[test]
    fn cavity_channel_pumps_vacuum_into_target() {
        let p = fig2();
        let dq = derived_quantities(&p).unwrap();
        let m = effective_model(1, &p).unwrap();
        let got = m.l_eff[0].op[(G::S13.index(), G::G000.index())];
        let want = -(p.kappa.sqrt() * p.g * p.omegas[0]) / (3f64.sqrt() * dq.r(1, 1));
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn atomic_channel_on_111_for_drive_3() {
        // ⟨111|L_eff,3^{γ,1,m}|111⟩ = √γ δ̃₃Ω₃/(3√2 R̃₃,₃).
        let p = fig2();
        let dq = derived_quantities(&p).unwrap();
        let m = effective_model(3, &p).unwrap();
        let want = p.gamma.sqrt() * dq.small(3) * p.omegas[2] / (3.0 * 2f64.sqrt() * dq.r(3, 3));
        for ch in &m.l_eff[4..7] {
            let got = ch.op[(G::G111.index(), G::G111.index())];
            assert!((got - want).norm() < 1e-12 * want.norm(), "{}", ch.label);
        }
    }

    #[test]
    fn no_direct_path_from_111_to_target() {
        let p = fig2();
        for k in 1..=4 {
            assert_eq!(numeric_rate(G::G111, G::S13, k, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn vacuum_to_target_rate_for_drive_1() {
        let p = fig2();
        let dq = derived_quantities(&p).unwrap();
        let om = p.omegas[0];
        let r = dq.r(1, 1);
        let cavity = (p.kappa.sqrt() * p.g * om / (3f64.sqrt() * r)).norm_sqr();
        let atomic = 3.0 * (p.gamma.sqrt() * dq.small(1) * om / (3.0 * 6f64.sqrt() * r)).norm_sqr();
        let got = numeric_rate(G::G000, G::S13, 1, &p).unwrap();
        assert!((got - (cavity + atomic)).abs() < 1e-12 * got);
    }

    #[test]
    fn diagonal_rates_are_excluded() {
        let m = effective_model(1, &fig2()).unwrap();
        for g in G::ALL {
            assert_eq!(m.rate(g, g), 0.0);
        }
    }
}
