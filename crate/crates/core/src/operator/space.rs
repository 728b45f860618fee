// SPDX-License-Identifier: Apache-2.0

use crate::{Error, Result};

/// Levels per atom: `|0⟩`, `|1⟩` (ground) and `|2⟩` (excited).
pub const ATOM_LEVELS: usize = 3;
/// Number of atoms in the cavity.
pub const ATOM_COUNT: usize = 3;
/// Default Fock-space truncation (photon numbers `0..=2`).
pub const DEFAULT_N_MAX: usize = 2;

/// Three three-level atoms tensored with a truncated cavity mode.
///
/// Basis ordering is fixed: atom 1 is the slowest index and the photon number
/// the fastest, so that
/// `index = ((l1 * 3 + l2) * 3 + l3) * cavity_dim + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    cavity_dim: usize,
}

/// Product-basis label `|l1, l2, l3; n⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub atoms: [usize; ATOM_COUNT],
    pub photons: usize,
}

impl BasisLabel {
    pub const fn new(atoms: [usize; ATOM_COUNT], photons: usize) -> Self {
        Self { atoms, photons }
    }

    /// Photon number plus the number of atoms in `|2⟩`.
    pub fn excitations(&self) -> usize {
        self.photons + self.atoms.iter().filter(|&&l| l == 2).count()
    }
}

impl HilbertSpace {
    pub fn new(cavity_dim: usize) -> Result<Self> {
        if cavity_dim == 0 {
            return Err(Error::invalid("cavity dimension must be at least 1"));
        }
        Ok(Self { cavity_dim })
    }

    pub fn with_n_max(n_max: usize) -> Self {
        Self {
            cavity_dim: n_max + 1,
        }
    }

    pub fn cavity_dim(&self) -> usize {
        self.cavity_dim
    }

    pub fn n_max(&self) -> usize {
        self.cavity_dim - 1
    }

    pub fn atom_levels(&self) -> usize {
        ATOM_LEVELS
    }

    pub fn atom_count(&self) -> usize {
        ATOM_COUNT
    }

    pub fn total_dim(&self) -> usize {
        ATOM_LEVELS.pow(ATOM_COUNT as u32) * self.cavity_dim
    }

    /// Dimensions of the tensor factors in basis order.
    pub fn subsystem_dims(&self) -> [usize; ATOM_COUNT + 1] {
        [ATOM_LEVELS, ATOM_LEVELS, ATOM_LEVELS, self.cavity_dim]
    }

    pub fn encode(&self, label: BasisLabel) -> Result<usize> {
        for &level in &label.atoms {
            if level >= ATOM_LEVELS {
                return Err(Error::IndexOutOfRange {
                    what: "atom level",
                    value: level,
                    min: 0,
                    max: ATOM_LEVELS - 1,
                });
            }
        }
        if label.photons >= self.cavity_dim {
            return Err(Error::IndexOutOfRange {
                what: "photon number",
                value: label.photons,
                min: 0,
                max: self.n_max(),
            });
        }
        let atomic = label
            .atoms
            .iter()
            .fold(0, |acc, &level| acc * ATOM_LEVELS + level);
        Ok(atomic * self.cavity_dim + label.photons)
    }

    pub fn decode(&self, index: usize) -> Result<BasisLabel> {
        if index >= self.total_dim() {
            return Err(Error::IndexOutOfRange {
                what: "basis",
                value: index,
                min: 0,
                max: self.total_dim() - 1,
            });
        }
        let photons = index % self.cavity_dim;
        let mut atomic = index / self.cavity_dim;
        let mut atoms = [0; ATOM_COUNT];
        for slot in atoms.iter_mut().rev() {
            *slot = atomic % ATOM_LEVELS;
            atomic /= ATOM_LEVELS;
        }
        Ok(BasisLabel { atoms, photons })
    }

    /// All basis labels in index order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.total_dim()).map(move |i| self.decode(i).expect("index in range"))
    }
}

impl Default for HilbertSpace {
    fn default() -> Self {
        Self::with_n_max(DEFAULT_N_MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_space_is_81_dimensional() {
        let space = HilbertSpace::default();
        assert_eq!(space.cavity_dim(), 3);
        assert_eq!(space.total_dim(), 81);
    }

    #[test]
    fn photon_is_fastest_index() {
        let space = HilbertSpace::default();
        assert_eq!(space.encode(BasisLabel::new([0, 0, 0], 1)).unwrap(), 1);
        assert_eq!(space.encode(BasisLabel::new([0, 0, 1], 0)).unwrap(), 3);
        assert_eq!(space.encode(BasisLabel::new([1, 0, 0], 0)).unwrap(), 27);
        assert_eq!(space.encode(BasisLabel::new([2, 2, 2], 2)).unwrap(), 80);
    }

    #[test]
    fn out_of_range_labels_are_rejected() {
        let space = HilbertSpace::default();
        assert!(space.encode(BasisLabel::new([3, 0, 0], 0)).is_err());
        assert!(space.encode(BasisLabel::new([0, 0, 0], 3)).is_err());
        assert!(space.decode(81).is_err());
        assert!(HilbertSpace::new(0).is_err());
    }

    proptest! {
        #[test]
        fn index_bijection_round_trips(n_max in 0usize..5, raw in 0usize..10_000) {
            let space = HilbertSpace::with_n_max(n_max);
            let idx = raw % space.total_dim();
            let label = space.decode(idx).unwrap();
            prop_assert_eq!(space.encode(label).unwrap(), idx);
        }
    }
}
