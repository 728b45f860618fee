// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::operators::effective_model;
use crate::model::{GroundState, SystemParams, DRIVE_COUNT};
use crate::Result;

const N: usize = 8;

/// Ground-manifold transition rates, stored as `mu[to][from]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    mu: [[f64; N]; N],
}

impl RateMatrix {
    pub fn zeros() -> Self {
        Self { mu: [[0.0; N]; N] }
    }

    /// Builds from `f(from, to)`; the diagonal is forced to zero.
    pub fn from_fn(f: impl Fn(GroundState, GroundState) -> f64) -> Self {
        let mut m = Self::zeros();
        for from in GroundState::ALL {
            for to in GroundState::ALL {
                if from != to {
                    m.mu[to.index()][from.index()] = f(from, to);
                }
            }
        }
        m
    }

    /// Rate from `from` into `to`.
    pub fn get(&self, from: GroundState, to: GroundState) -> f64 {
        self.mu[to.index()][from.index()]
    }

    /// Raw `mu[to][from]` table.
    pub fn as_array(&self) -> &[[f64; N]; N] {
        &self.mu
    }

    pub fn outflow(&self, from: GroundState) -> f64 {
        (0..N).map(|to| self.mu[to][from.index()]).sum()
    }

    pub fn inflow(&self, to: GroundState) -> f64 {
        self.mu[to.index()].iter().sum()
    }

    pub fn min_entry(&self) -> f64 {
        self.mu
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `dP/dt = G P` with `G[y][z] = μ(z → y)` off the diagonal and
    /// `G[y][y] = −Σ_z μ(y → z)`.
    pub fn generator(&self) -> DMatrix<f64> {
        let mut g = DMatrix::from_fn(
            N,
            N,
            |to, from| if to == from { 0.0 } else { self.mu[to][from] },
        );
        for y in GroundState::ALL {
            g[(y.index(), y.index())] = -self.outflow(y);
        }
        g
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("from");
        for z in GroundState::ALL {
            out.push(',');
            out.push_str(z.label());
        }
        out.push('\n');
        for y in GroundState::ALL {
            out.push_str(y.label());
            for z in GroundState::ALL {
                out.push_str(&format!(",{:.8e}", self.get(y, z)));
            }
            out.push('\n');
        }
        out
    }
}

impl std::ops::Add for &RateMatrix {
    type Output = RateMatrix;
    fn add(self, rhs: &RateMatrix) -> RateMatrix {
        let mut out = self.clone();
        for (row, other) in out.mu.iter_mut().zip(&rhs.mu) {
            for (a, b) in row.iter_mut().zip(other) {
                *a += b;
            }
        }
        out
    }
}

/// Rate matrix of a single drive.
pub fn drive_rate_matrix(k: usize, params: &SystemParams) -> Result<RateMatrix> {
    Ok(effective_model(k, params)?.rate_matrix())
}

/// `μ(y → z) = Σₖ μ⁽ᵏ⁾(y → z)`, drives evaluated in parallel.
pub fn assemble_rate_matrix(params: &SystemParams) -> Result<RateMatrix> {
    params.validate()?;
    let parts: Vec<RateMatrix> = (1..=DRIVE_COUNT)
        .into_par_iter()
        .map(|k| drive_rate_matrix(k, params))
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(RateMatrix::zeros(), |acc, m| &acc + m))
}
