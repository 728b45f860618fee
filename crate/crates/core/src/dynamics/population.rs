// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use crate::model::{ground_basis, GroundState};
use crate::operator::DensityMatrix;
use crate::{Error, Result, C64};

/// Tolerance on `Σp = 1`.
pub const POPULATION_SUM_TOLERANCE: f64 = 1e-9;
/// Entries within this distance outside `[0, 1]` are clamped, anything
/// further is rejected.
pub const POPULATION_CLAMP: f64 = 1e-12;

const N: usize = 8;

/// Ground-state populations in ground-basis order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationVector {
    p: [f64; N],
}

impl PopulationVector {
    pub fn new(p: [f64; N]) -> Result<Self> {
        let mut out = p;
        for (i, x) in out.iter_mut().enumerate() {
            if !x.is_finite() || *x < -POPULATION_CLAMP || *x > 1.0 + POPULATION_CLAMP {
                return Err(Error::invalid(format!(
                    "population of {} is {x}",
                    GroundState::ALL[i].label()
                )));
            }
            *x = x.clamp(0.0, 1.0);
        }
        let sum: f64 = out.iter().sum();
        if (sum - 1.0).abs() > POPULATION_SUM_TOLERANCE {
            return Err(Error::invalid(format!("populations sum to {sum}")));
        }
        Ok(Self { p: out })
    }

    pub fn uniform() -> Self {
        Self {
            p: [1.0 / N as f64; N],
        }
    }

    pub fn basis(state: GroundState) -> Self {
        let mut p = [0.0; N];
        p[state.index()] = 1.0;
        Self { p }
    }

    pub fn as_array(&self) -> &[f64; N] {
        &self.p
    }

    pub fn get(&self, state: GroundState) -> f64 {
        self.p[state.index()]
    }

    pub fn fidelity(&self) -> f64 {
        self.get(GroundState::TARGET)
    }

    /// `Σp²`, the purity of the corresponding diagonal density matrix.
    pub fn purity(&self) -> f64 {
        self.p.iter().map(|x| x * x).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// `⟨S₁,₃|ρ|S₁,₃⟩`.
    pub fidelity: f64,
    /// `Tr ρ²`.
    pub purity: f64,
}

/// Imaginary part of `⟨S₁,₃|ρ|S₁,₃⟩` tolerated before the state is rejected.
pub const FIDELITY_IMAGINARY_LIMIT: f64 = 1e-10;

pub fn metrics(rho: &DensityMatrix) -> Result<Metrics> {
    let basis = ground_basis(rho.space());
    let f = rho.expectation(basis.state(GroundState::TARGET));
    if f.im.abs() > FIDELITY_IMAGINARY_LIMIT {
        return Err(Error::invalid(format!(
            "fidelity has imaginary part {:e}",
            f.im
        )));
    }
    Ok(Metrics {
        fidelity: f.re,
        purity: rho.purity(),
    })
}

/// Purity of a raw density matrix, `Σ|ρᵢⱼ|²`.
pub(crate) fn raw_purity(rho: &DMatrix<C64>) -> f64 {
    rho.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ground_basis;
    use crate::operator::HilbertSpace;

    #[test]
    fn target_state_metrics() {
        let space = HilbertSpace::default();
        let basis = ground_basis(space);
        let rho = DensityMatrix::pure(basis.state(GroundState::S13)).unwrap();
        let m = metrics(&rho).unwrap();
        assert!((m.fidelity - 1.0).abs() < 1e-12);
        assert!((m.purity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_ground_mixture_metrics() {
        let space = HilbertSpace::default();
        let basis = ground_basis(space);
        let comps: Vec<_> = basis
            .states()
            .iter()
            .map(|s| (1.0 / 8.0, s.clone()))
            .collect();
        let rho = DensityMatrix::mixture(space, &comps).unwrap();
        let m = metrics(&rho).unwrap();
        assert!((m.fidelity - 0.125).abs() < 1e-12);
        assert!((m.purity - 0.125).abs() < 1e-12);
        let p = PopulationVector::uniform();
        assert_eq!(p.fidelity(), 0.125);
        assert!((p.purity() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn populations_are_validated_and_clamped() {
        let mut raw = [0.0; 8];
        raw[0] = 1.0 + 5e-13;
        raw[1] = -5e-13;
        let p = PopulationVector::new(raw).unwrap();
        assert_eq!(p.as_array()[0], 1.0);
        assert_eq!(p.as_array()[1], 0.0);
        raw[1] = -1e-6;
        assert!(PopulationVector::new(raw).is_err());
        assert!(PopulationVector::new([0.1; 8]).is_err());
    }
}
