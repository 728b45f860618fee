// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;

use crate::operator::{BasisLabel, HilbertSpace, StateVector};
use crate::{Error, Result, C64};

/// The eight ground-manifold states in Fourier order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundState {
    G000,
    S11,
    S12,
    /// The W state `(|100⟩ + |010⟩ + |001⟩)/√3`.
    S13,
    S21,
    S22,
    S23,
    G111,
}

impl GroundState {
    pub const ALL: [GroundState; 8] = [
        GroundState::G000,
        GroundState::S11,
        GroundState::S12,
        GroundState::S13,
        GroundState::S21,
        GroundState::S22,
        GroundState::S23,
        GroundState::G111,
    ];

    pub const TARGET: GroundState = GroundState::S13;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL.get(i).copied().ok_or(Error::IndexOutOfRange {
            what: "ground state",
            value: i,
            min: 0,
            max: 7,
        })
    }

    /// Short column label: `000`, `s11`, ..., `111`.
    pub fn label(self) -> &'static str {
        ["000", "s11", "s12", "s13", "s21", "s22", "s23", "111"][self.index()]
    }

    pub fn parse(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let lower = lower.trim_start_matches('|').trim_end_matches('>');
        let key = lower.replace(['_', ','], "");
        Self::ALL
            .iter()
            .copied()
            .find(|g| g.label() == key)
            .ok_or_else(|| Error::invalid(format!("unknown ground state {s:?}")))
    }
}

impl fmt::Display for GroundState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Fourier-transformed ground basis, each state ⊗ photon vacuum.
#[derive(Debug, Clone)]
pub struct GroundBasis {
    space: HilbertSpace,
    states: Vec<StateVector>,
}

fn phase(turns_of_third: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * turns_of_third as f64 / 3.0)
}

/// `(e^{i2jπ/3}|a⟩ + e^{i4jπ/3}|b⟩ + |c⟩)/√3`.
fn fourier_state(space: HilbertSpace, j: usize, kets: [[usize; 3]; 3]) -> Result<StateVector> {
    let s = 1.0 / 3f64.sqrt();
    StateVector::superposition(
        space,
        &[
            (phase(j) * s, BasisLabel::new(kets[0], 0)),
            (phase(2 * j) * s, BasisLabel::new(kets[1], 0)),
            (C64::new(s, 0.0), BasisLabel::new(kets[2], 0)),
        ],
    )
}

pub fn ground_basis(space: HilbertSpace) -> GroundBasis {
    let build = || -> Result<Vec<StateVector>> {
        let mut states = Vec::with_capacity(8);
        states.push(StateVector::basis(space, BasisLabel::new([0, 0, 0], 0))?);
        for j in 1..=3 {
            states.push(fourier_state(space, j, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])?);
        }
        for j in 1..=3 {
            states.push(fourier_state(space, j, [[1, 1, 0], [1, 0, 1], [0, 1, 1]])?);
        }
        states.push(StateVector::basis(space, BasisLabel::new([1, 1, 1], 0))?);
        Ok(states)
    };
    GroundBasis {
        space,
        states: build().expect("ground labels are valid in every space"),
    }
}

impl GroundBasis {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn state(&self, which: GroundState) -> &StateVector {
        &self.states[which.index()]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// `total_dim × 8` isometry whose columns are the basis states.
    pub fn isometry(&self) -> DMatrix<C64> {
        let d = self.space.total_dim();
        DMatrix::from_fn(d, 8, |r, c| self.states[c].amplitudes()[r])
    }

    /// Gram matrix `⟨i|j⟩`.
    pub fn gram(&self) -> DMatrix<C64> {
        DMatrix::from_fn(8, 8, |r, c| self.states[r].inner(&self.states[c]))
    }
}
