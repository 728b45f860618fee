// SPDX-License-Identifier: Apache-2.0

use super::master::TimeDependentHamiltonian;
use crate::model::{build_coupling, collective_raising, SystemParams, Transition};
use crate::operator::SparseOperator;
use crate::{Result, C64};

/// An operator block multiplied by `Σ aⱼ e^{iωⱼt}`.
#[derive(Debug, Clone)]
struct ModulatedTerm {
    /// Range of this term inside the shared pattern.
    start: usize,
    values: Vec<C64>,
    tones: Vec<(C64, f64)>,
}

impl ModulatedTerm {
    fn coefficient(&self, t: f64) -> C64 {
        self.tones
            .iter()
            .map(|&(a, w)| a * C64::from_polar(1.0, w * t))
            .sum()
    }
}

/// All four drives at once, in the frame resonant with both the cavity and
/// the `|q⟩ → |2⟩` transitions: `H(t) = H_JC + Σₖ (Ωₖ/3) Σₘ (e^{iΔₖt}|2⟩ₘ⟨qₖ| + h.c.)`.
/// The drives cannot all be removed by one frame change, so `H` stays
/// explicitly time dependent.
#[derive(Debug, Clone)]
pub struct CompositeHamiltonian {
    dim: usize,
    pattern: Vec<(usize, usize)>,
    coupling: Vec<C64>,
    terms: Vec<ModulatedTerm>,
}

pub fn build_composite_hamiltonian(params: &SystemParams) -> Result<CompositeHamiltonian> {
    params.validate()?;
    let jc = SparseOperator::from_dense(build_coupling(params)?.entries());
    let mut pattern: Vec<(usize, usize)> = jc.triplets().iter().map(|&(r, c, _)| (r, c)).collect();
    let coupling = jc.triplets().iter().map(|&(_, _, v)| v).collect();
    let mut terms = Vec::new();
    let mut push =
        |op: &SparseOperator, tones: Vec<(C64, f64)>, pattern: &mut Vec<(usize, usize)>| {
            terms.push(ModulatedTerm {
                start: pattern.len(),
                values: op.triplets().iter().map(|&(_, _, v)| v).collect(),
                tones,
            });
            pattern.extend(op.triplets().iter().map(|&(r, c, _)| (r, c)));
        };
    for (transition, drives) in [
        (Transition::ZeroToTwo, [1, 2]),
        (Transition::OneToTwo, [3, 4]),
    ] {
        debug_assert!(drives
            .iter()
            .all(|&k| Transition::for_drive(k).ok() == Some(transition)));
        let raise = SparseOperator::from_dense(collective_raising(drives[0], params)?.entries());
        let tones: Vec<_> = drives
            .iter()
            .map(|&k| (C64::from(params.omegas[k - 1] / 3.0), params.deltas[k - 1]))
            .collect();
        let lower_tones = tones.iter().map(|&(a, w)| (a.conj(), -w)).collect();
        push(&raise.adjoint(), lower_tones, &mut pattern);
        push(&raise, tones, &mut pattern);
    }
    Ok(CompositeHamiltonian {
        dim: jc.dim(),
        pattern,
        coupling,
        terms,
    })
}

impl TimeDependentHamiltonian for CompositeHamiltonian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn pattern(&self) -> &[(usize, usize)] {
        &self.pattern
    }

    fn values_at(&self, t: f64, values: &mut [C64]) {
        values[..self.coupling.len()].copy_from_slice(&self.coupling);
        for term in &self.terms {
            let c = term.coefficient(t);
            for (slot, v) in values[term.start..term.start + term.values.len()]
                .iter_mut()
                .zip(&term.values)
            {
                *slot = c * v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hamiltonian, build_vminus, build_vplus};
    use crate::operator::{excitation_number, max_modulus};
    use nalgebra::DMatrix;

    fn single_drive(k: usize) -> SystemParams {
        let mut p = SystemParams::fig2(0.04);
        p.deltas = [0.3, 1.0, 3f64.sqrt(), 2f64.sqrt()];
        let om = p.omegas[k - 1];
        p.omegas = [0.0; 4];
        p.omegas[k - 1] = om;
        p
    }

    #[test]
    fn frame_change_recovers_single_drive_hamiltonian() {
        // ψ' = Uψ with U = exp(−iΔt N) gives H' = U H U† + Δ N.
        for k in 1..=4 {
            let p = single_drive(k);
            let h = build_composite_hamiltonian(&p).unwrap();
            let n = excitation_number(p.space());
            let delta = p.deltas[k - 1];
            let want = build_hamiltonian(k, &p).unwrap();
            for t in [0.0, 0.7, 13.1, 250.0] {
                let u = DMatrix::from_diagonal(
                    &n.entries()
                        .diagonal()
                        .map(|x| C64::from_polar(1.0, -delta * t * x.re)),
                );
                let rotated = &u * h.dense_at(t) * u.adjoint() + n.entries() * C64::from(delta);
                assert!(
                    max_modulus(&(rotated - want.entries())) < 1e-12,
                    "k={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn at_time_zero_all_phases_are_one() {
        let p = SystemParams::fig2(0.04);
        let h = build_composite_hamiltonian(&p).unwrap();
        let mut want = build_coupling(&p).unwrap().into_entries();
        for k in 1..=4 {
            want += build_vplus(k, &p).unwrap().entries() + build_vminus(k, &p).unwrap().entries();
        }
        assert!(max_modulus(&(h.dense_at(0.0) - want)) < 1e-15);
    }

    #[test]
    fn undriven_hamiltonian_is_static_coupling() {
        let p = SystemParams {
            omegas: [0.0; 4],
            ..SystemParams::fig2(0.04)
        };
        let h = build_composite_hamiltonian(&p).unwrap();
        let jc = build_coupling(&p).unwrap().into_entries();
        for t in [0.0, 3.0, 1234.5] {
            assert_eq!(h.dense_at(t), jc);
        }
    }

    #[test]
    fn hermitian_at_all_times() {
        let h = build_composite_hamiltonian(&SystemParams::fig2(0.04)).unwrap();
        for t in [0.1, 17.0, 5000.0] {
            let m = h.dense_at(t);
            assert!(max_modulus(&(&m - m.adjoint())) < 1e-15);
        }
    }
}
