// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use crate::model::{build_nonhermitian_full, derived_quantities, SystemParams};
use crate::operator::{excitation_number, max_modulus, OperatorMatrix};
use crate::{Error, Result, C64};

/// Condition number above which the excited block is treated as singular.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Maximum accepted `max |B·B⁻¹ − I|`.
pub const INVERSION_RESIDUAL_LIMIT: f64 = 1e-10;

/// `H_NH = H₀⁽ᵏ⁾ − (i/2) Σ L†L` together with its single-excitation block.
#[derive(Debug, Clone)]
pub struct NonHermitianBlock {
    pub k: usize,
    pub full: OperatorMatrix,
    /// Product-basis indices with exactly one excitation, ascending.
    pub excited_indices: Vec<usize>,
    pub block: DMatrix<C64>,
    inverse: Option<DMatrix<C64>>,
}

impl NonHermitianBlock {
    pub fn inverse(&self) -> Option<&DMatrix<C64>> {
        self.inverse.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.excited_indices.len()
    }

    /// 2-norm condition number of the block.
    pub fn condition_number(&self) -> f64 {
        condition_number(&self.block)
    }

    /// `max |B·B⁻¹ − I|`, if the inverse has been computed.
    pub fn inversion_residual(&self) -> Option<f64> {
        self.inverse.as_ref().map(|inv| residual(&self.block, inv))
    }
}

pub(crate) fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

fn residual(block: &DMatrix<C64>, inv: &DMatrix<C64>) -> f64 {
    let n = block.nrows();
    max_modulus(&(block * inv - DMatrix::<C64>::identity(n, n)))
}

/// Assembles `H_NH` for drive `k` and extracts the `N_exc = 1` block.
pub fn build_nonhermitian(k: usize, params: &SystemParams) -> Result<NonHermitianBlock> {
    derived_quantities(params)?;
    let full = build_nonhermitian_full(k, params)?;
    let n_exc = excitation_number(params.space());
    let excited_indices: Vec<usize> = (0..n_exc.dim())
        .filter(|&i| (n_exc.get(i, i).re - 1.0).abs() < 1e-12)
        .collect();
    let e = &excited_indices;
    let block = DMatrix::from_fn(e.len(), e.len(), |r, c| full.get(e[r], e[c]));
    let cond = condition_number(&block);
    if cond.is_nan() || cond > CONDITION_LIMIT {
        return Err(Error::Degenerate(format!(
            "excited block for drive {k} has condition number {cond:e}"
        )));
    }
    Ok(NonHermitianBlock {
        k,
        full,
        excited_indices,
        block,
        inverse: None,
    })
}

/// Fills in `B⁻¹` by LU and checks the residual.
pub fn invert_excited_block(mut nh: NonHermitianBlock) -> Result<NonHermitianBlock> {
    let inv = nh.block.clone().lu().try_inverse().ok_or_else(|| {
        Error::Degenerate(format!("excited block for drive {} is singular", nh.k))
    })?;
    let res = residual(&nh.block, &inv);
    if res.is_nan() || res >= INVERSION_RESIDUAL_LIMIT {
        return Err(Error::Degenerate(format!(
            "inversion residual {res:e} for drive {} exceeds {INVERSION_RESIDUAL_LIMIT:e}",
            nh.k
        )));
    }
    nh.inverse = Some(inv);
    Ok(nh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_lindblad_set, lindblad_sum};
    use crate::operator::BasisLabel;

    #[test]
    fn single_excitation_block_has_twenty_states() {
        for n_max in 1..=3 {
            let p = SystemParams {
                n_max,
                ..SystemParams::fig2(0.04)
            };
            let nh = build_nonhermitian(2, &p).unwrap();
            assert_eq!(nh.dim(), 3 * 4 + 8);
        }
    }

    #[test]
    fn anti_hermitian_part_is_total_loss() {
        let p = SystemParams::fig2(0.04);
        let nh = build_nonhermitian(3, &p).unwrap();
        let anti = (&nh.full - &nh.full.adjoint()).scaled(C64::new(0.5, 0.0));
        let loss = lindblad_sum(&build_lindblad_set(&p).unwrap()).scaled(C64::new(0.0, -0.5));
        assert!((&anti - &loss).max_abs() < 1e-12);
    }

    #[test]
    fn decoupled_block_inverts_diagonally() {
        let p = SystemParams {
            g: 0.0,
            ..SystemParams::fig2(0.04)
        };
        let space = p.space();
        for k in 1..=4 {
            let nh = invert_excited_block(build_nonhermitian(k, &p).unwrap()).unwrap();
            let inv = nh.inverse().unwrap();
            let delta = p.deltas[k - 1];
            for (r, &idx) in nh.excited_indices.iter().enumerate() {
                let label: BasisLabel = space.decode(idx).unwrap();
                let want = if label.photons == 1 {
                    C64::new(1.0, 0.0) / C64::new(delta, -p.kappa / 2.0)
                } else {
                    C64::new(1.0, 0.0) / C64::new(delta, -p.gamma / 2.0)
                };
                for c in 0..nh.dim() {
                    let expected = if r == c { want } else { C64::new(0.0, 0.0) };
                    assert!((inv[(r, c)] - expected).norm() < 1e-12 * want.norm());
                }
            }
        }
    }

    #[test]
    fn unit_block_inverts_to_identity() {
        let p = SystemParams {
            g: 0.0,
            kappa: 0.0,
            gamma: 0.0,
            deltas: [1.0; 4],
            ..SystemParams::fig2(0.04)
        };
        let nh = invert_excited_block(build_nonhermitian(1, &p).unwrap()).unwrap();
        assert_eq!(nh.block, DMatrix::identity(20, 20));
        assert!(max_modulus(&(nh.inverse().unwrap() - DMatrix::<C64>::identity(20, 20))) < 1e-15);
    }

    #[test]
    fn operating_point_inverts_cleanly() {
        let p = SystemParams::fig2(0.04);
        for k in 1..=4 {
            let nh = invert_excited_block(build_nonhermitian(k, &p).unwrap()).unwrap();
            assert!(nh.inversion_residual().unwrap() < 1e-12);
            assert!(nh.condition_number() < 1e4);
        }
    }

    #[test]
    fn lossless_resonance_is_rejected() {
        let p = SystemParams {
            kappa: 0.0,
            gamma: 0.0,
            ..SystemParams::fig2(0.04)
        };
        assert!(matches!(
            build_nonhermitian(3, &p),
            Err(Error::Degenerate(_))
        ));
    }
}
