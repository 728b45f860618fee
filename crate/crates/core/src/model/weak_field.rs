// SPDX-License-Identifier: Apache-2.0

use super::params::{SystemParams, DRIVE_COUNT};
use crate::{Error, Result};

/// Ratio above which a drive pair is flagged.
pub const WEAK_FIELD_FLAG_RATIO: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct WeakFieldPair {
    pub k: usize,
    pub l: usize,
    /// `ΩₖΩₗ(1/Δₖ + 1/Δₗ)/2`, each `1/Δ` regularized to `1/max(|Δ|, γ/2)`.
    pub lhs: f64,
    /// `|Δₖ − Δₗ|`.
    pub rhs: f64,
    pub ratio: f64,
}

impl WeakFieldPair {
    pub fn flagged(&self) -> bool {
        self.ratio > WEAK_FIELD_FLAG_RATIO
    }
}

/// Heuristic check that cross-drive Raman processes are negligible.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakFieldReport {
    pub pairs: Vec<WeakFieldPair>,
}

impl WeakFieldReport {
    pub fn passes(&self) -> bool {
        self.pairs.iter().all(|p| !p.flagged())
    }

    pub fn flagged(&self) -> impl Iterator<Item = &WeakFieldPair> {
        self.pairs.iter().filter(|p| p.flagged())
    }

    pub fn max_ratio(&self) -> f64 {
        self.pairs.iter().map(|p| p.ratio).fold(0.0, f64::max)
    }
}

pub fn check_weak_field(params: &SystemParams) -> Result<WeakFieldReport> {
    let floor = params.gamma / 2.0;
    let inv = |delta: f64| {
        let scale = delta.abs().max(floor);
        if scale > 0.0 {
            1.0 / scale
        } else {
            f64::INFINITY
        }
    };
    let mut pairs = Vec::with_capacity(6);
    for k in 1..=DRIVE_COUNT {
        for l in (k + 1)..=DRIVE_COUNT {
            let (dk, dl) = (params.deltas[k - 1], params.deltas[l - 1]);
            let rhs = (dk - dl).abs();
            if rhs == 0.0 {
                return Err(Error::WeakField(format!(
                    "drives {k} and {l} share detuning {dk}; the condition cannot hold"
                )));
            }
            let product = params.omegas[k - 1] * params.omegas[l - 1];
            let lhs = if product == 0.0 {
                0.0
            } else {
                product * (inv(dk) + inv(dl)) / 2.0
            };
            pairs.push(WeakFieldPair {
                k,
                l,
                lhs,
                rhs,
                ratio: lhs / rhs,
            });
        }
    }
    Ok(WeakFieldReport { pairs })
}
