// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::population::PopulationVector;
use crate::model::ground_basis;
use crate::operator::{DensityMatrix, HilbertSpace, StateVector};
use crate::{Error, Result, C64};

/// Starting point of a run, always inside the ground manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Incoherent equal mixture of the eight ground states.
    Uniform,
    /// Haar-random pure ground state drawn from a seeded generator.
    Haar { seed: u64 },
}

impl InitialState {
    /// Accepts `uniform`, `haar` (seed 0) or `haar:<seed>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "uniform" => Ok(Self::Uniform),
            None if s == "haar" => Ok(Self::Haar { seed: 0 }),
            Some(("haar", seed)) => seed
                .trim()
                .parse()
                .map(|seed| Self::Haar { seed })
                .map_err(|_| Error::invalid(format!("bad haar seed `{seed}`"))),
            _ => Err(Error::invalid(format!("unknown initial state `{s}`"))),
        }
    }

    /// Amplitudes in ground-basis order, or `None` for the mixture.
    pub fn ground_amplitudes(&self) -> Option<DVector<C64>> {
        match *self {
            Self::Uniform => None,
            Self::Haar { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v = DVector::from_fn(8, |_, _| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                });
                let norm = v.norm();
                Some(v / C64::from(norm))
            }
        }
    }

    pub fn populations(&self) -> PopulationVector {
        match self.ground_amplitudes() {
            None => PopulationVector::uniform(),
            Some(v) => {
                let mut p = [0.0; 8];
                for (slot, z) in p.iter_mut().zip(v.iter()) {
                    *slot = z.norm_sqr();
                }
                let sum: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= sum);
                PopulationVector::new(p).expect("normalized by construction")
            }
        }
    }

    /// Density matrix on the eight-dimensional ground manifold.
    pub fn ground_density(&self) -> DMatrix<C64> {
        match self.ground_amplitudes() {
            None => DMatrix::identity(8, 8) * C64::from(0.125),
            Some(v) => &v * v.adjoint(),
        }
    }

    /// Density matrix on the full atom-cavity space.
    pub fn density(&self, space: HilbertSpace) -> Result<DensityMatrix> {
        let basis = ground_basis(space);
        match self.ground_amplitudes() {
            None => {
                let comps: Vec<_> = basis.states().iter().map(|s| (1.0, s.clone())).collect();
                DensityMatrix::mixture(space, &comps)
            }
            Some(v) => {
                let psi = basis.isometry() * v;
                DensityMatrix::pure(&StateVector::from_amplitudes(space, psi)?)
            }
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => f.write_str("uniform"),
            Self::Haar { seed } => write!(f, "haar:{seed}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [InitialState::Uniform, InitialState::Haar { seed: 42 }] {
            assert_eq!(InitialState::parse(&s.to_string()).unwrap(), s);
        }
        assert_eq!(
            InitialState::parse("haar").unwrap(),
            InitialState::Haar { seed: 0 }
        );
        assert!(InitialState::parse("haar:x").is_err());
        assert!(InitialState::parse("thermal").is_err());
    }

    #[test]
    fn haar_state_is_seeded_and_normalized() {
        let a = InitialState::Haar { seed: 7 }.ground_amplitudes().unwrap();
        let b = InitialState::Haar { seed: 7 }.ground_amplitudes().unwrap();
        let c = InitialState::Haar { seed: 8 }.ground_amplitudes().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!((a.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn full_density_is_valid_and_consistent_with_populations() {
        let space = HilbertSpace::default();
        for init in [InitialState::Uniform, InitialState::Haar { seed: 3 }] {
            let rho = init.density(space).unwrap();
            rho.validate().unwrap();
            let iso = ground_basis(space).isometry();
            let reduced = iso.adjoint() * rho.entries() * &iso;
            let g = init.ground_density();
            for y in 0..8 {
                assert!((reduced[(y, y)].re - init.populations().as_array()[y]).abs() < 1e-12);
                for z in 0..8 {
                    assert!((reduced[(y, z)] - g[(y, z)]).norm() < 1e-12);
                }
            }
        }
    }
}
