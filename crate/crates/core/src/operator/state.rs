// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::space::{BasisLabel, HilbertSpace};
use crate::{Error, Result, C64};

/// Allowed `|Tr ρ − 1|`.
pub const TRACE_TOLERANCE: f64 = 1e-9;
/// Allowed `max |ρ − ρ†|`.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// Most negative eigenvalue accepted for a physical state.
pub const EIGENVALUE_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn basis(space: HilbertSpace, label: BasisLabel) -> Result<Self> {
        let idx = space.encode(label)?;
        let mut amplitudes = DVector::zeros(space.total_dim());
        amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    pub fn from_amplitudes(space: HilbertSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { space, amplitudes })
    }

    pub(crate) fn from_amplitudes_unchecked(space: HilbertSpace, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), space.total_dim());
        Self { space, amplitudes }
    }

    /// Superposition `Σ cᵢ |labelᵢ⟩`.
    pub fn superposition(space: HilbertSpace, terms: &[(C64, BasisLabel)]) -> Result<Self> {
        let mut amplitudes = DVector::zeros(space.total_dim());
        for &(coeff, label) in terms {
            amplitudes[space.encode(label)?] += coeff;
        }
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: BasisLabel) -> Result<C64> {
        Ok(self.amplitudes[self.space.encode(label)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < 1e-12
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Self {
            space: self.space,
            amplitudes: self.amplitudes.unscale(n),
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Density matrix on the full atom ⊗ cavity space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Builds a density matrix, rejecting anything unphysical.
    pub fn from_entries(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_entries_unchecked(space, entries)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Dimension check only; used by integrators that monitor the invariants themselves.
    pub fn from_entries_unchecked(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let d = space.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: entries.nrows(),
            });
        }
        Ok(Self { space, entries })
    }

    pub fn pure(state: &StateVector) -> Result<Self> {
        let psi = state.normalized()?;
        let entries = psi.amplitudes() * psi.amplitudes().adjoint();
        Ok(Self {
            space: state.space(),
            entries,
        })
    }

    /// Incoherent mixture `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`; weights are normalized to sum to one.
    pub fn mixture(space: HilbertSpace, components: &[(f64, StateVector)]) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if components.is_empty() || total <= 0.0 || components.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::invalid(
                "mixture needs nonnegative weights with positive sum",
            ));
        }
        let d = space.total_dim();
        let mut entries = DMatrix::zeros(d, d);
        for (w, psi) in components {
            if psi.space() != space {
                return Err(Error::invalid(
                    "mixture component lives on a different space",
                ));
            }
            let psi = psi.normalized()?;
            entries += (psi.amplitudes() * psi.amplitudes().adjoint()) * C64::new(w / total, 0.0);
        }
        Ok(Self { space, entries })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr ρ²`, evaluated as `Σ |ρᵢⱼ|²` (exact for Hermitian ρ).
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        hermiticity_deviation(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.entries)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> C64 {
        psi.amplitudes().dotc(&(&self.entries * psi.amplitudes()))
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::invalid(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        let herm = self.hermiticity_deviation();
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let min = self.min_eigenvalue();
        if min < EIGENVALUE_FLOOR {
            return Err(Error::invalid(format!(
                "density matrix has negative eigenvalue {min:e}"
            )));
        }
        Ok(())
    }
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for c in 0..d {
        for r in c..d {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub(crate) fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
