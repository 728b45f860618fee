// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use crate::C64;

/// Coordinate-list operator used on the integrator hot path.
///
/// Every operator in the model has only a few hundred nonzeros on an
/// 81-dimensional space, so products against a dense density matrix are
/// done entry by entry.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn from_dense(m: &DMatrix<C64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "sparse operators are square");
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, c)];
                if z != C64::new(0.0, 0.0) {
                    entries.push((r, c, z));
                }
            }
        }
        Self {
            dim: m.nrows(),
            entries,
        }
    }

    pub fn from_triplets(dim: usize, entries: Vec<(usize, usize, C64)>) -> Self {
        assert!(entries.iter().all(|&(r, c, _)| r < dim && c < dim));
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(r, c, z)| (c, r, z.conj()))
                .collect(),
        }
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|&(r, c, z)| (r, c, z * factor))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, z) in &self.entries {
            m[(r, c)] += z;
        }
        m
    }

    /// `out += coeff · A · rho`.
    pub fn mul_add_left(&self, coeff: C64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let n = self.dim;
        debug_assert_eq!(rho.nrows(), n);
        let src = rho.as_slice();
        let dst = out.as_mut_slice();
        for j in 0..n {
            let col = &src[j * n..(j + 1) * n];
            let out_col = &mut dst[j * n..(j + 1) * n];
            for &(r, c, z) in &self.entries {
                out_col[r] += coeff * z * col[c];
            }
        }
    }

    /// `out += A · rho · A†`.
    pub fn sandwich_add(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        for &(b, d, w) in &self.entries {
            let wc = w.conj();
            for &(a, c, v) in &self.entries {
                out[(a, b)] += v * rho[(c, d)] * wc;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, seed: u64) -> DMatrix<C64> {
        // Deterministic sparse-ish pattern.
        DMatrix::from_fn(n, n, |r, c| {
            let h = (r as u64 * 31 + c as u64 * 17 + seed) % 7;
            if h < 3 {
                C64::new(h as f64 - 1.0, (r as f64 - c as f64) * 0.1)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn products_match_dense_algebra() {
        let a = sample(6, 3);
        let rho = DMatrix::from_fn(6, 6, |r, c| {
            C64::new((r + c) as f64 * 0.1, r as f64 - c as f64)
        });
        let sp = SparseOperator::from_dense(&a);
        assert_eq!(sp.to_dense(), a);
        assert_eq!(sp.adjoint().to_dense(), a.adjoint());

        let coeff = C64::new(0.5, -2.0);
        let mut out = DMatrix::zeros(6, 6);
        sp.mul_add_left(coeff, &rho, &mut out);
        assert!((out - &a * &rho * coeff).norm() < 1e-12);

        let mut out = DMatrix::zeros(6, 6);
        sp.sandwich_add(&rho, &mut out);
        assert!((out - &a * &rho * a.adjoint()).norm() < 1e-12);
    }
}
