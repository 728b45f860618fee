// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;

use super::space::{HilbertSpace, ATOM_COUNT, ATOM_LEVELS};
use super::state::StateVector;
use crate::{Error, Result, C64};

/// Dense complex operator on a [`HilbertSpace`], in units of `g`.
///
/// Arithmetic operators panic if the operands live on different spaces;
/// that is a programming error, not a runtime condition.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: HilbertSpace,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            entries: DMatrix::zeros(d, d),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space,
            entries: DMatrix::identity(d, d),
        }
    }

    pub fn from_entries(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let d = space.total_dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if entries.nrows() != d {
                    entries.nrows()
                } else {
                    entries.ncols()
                },
            });
        }
        Ok(Self { space, entries })
    }

    /// Diagonal operator with `f(index)` on the diagonal.
    pub fn diagonal(space: HilbertSpace, f: impl Fn(usize) -> C64) -> Self {
        let d = space.total_dim();
        Self {
            space,
            entries: DMatrix::from_fn(d, d, |r, c| if r == c { f(r) } else { C64::new(0.0, 0.0) }),
        }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            space: self.space,
            entries: self.entries.adjoint(),
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn scaled(&self, factor: impl Into<C64>) -> Self {
        let f = factor.into();
        Self {
            space: self.space,
            entries: self.entries.map(|z| z * f),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |A − A†|` over entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for c in 0..d {
            for r in 0..d {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(
            self.space,
            state.space(),
            "operator and state spaces differ"
        );
        StateVector::from_amplitudes_unchecked(self.space, &self.entries * state.amplitudes())
    }

    /// `⟨bra| A |ket⟩`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> C64 {
        bra.inner(&self.apply(ket))
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix {
            space: self.space,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self + &rhs
    }
}

impl AddAssign<&OperatorMatrix> for OperatorMatrix {
    fn add_assign(&mut self, rhs: &OperatorMatrix) {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        self.entries += &rhs.entries;
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix {
            space: self.space,
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self - &rhs
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix {
            space: self.space,
            entries: &self.entries * &rhs.entries,
        }
    }
}

impl Mul for OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        &self * &rhs
    }
}

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scaled(self)
    }
}

impl Mul<OperatorMatrix> for f64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        rhs.scaled(self)
    }
}

impl Mul<&OperatorMatrix> for C64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scaled(self)
    }
}

impl Mul<OperatorMatrix> for C64 {
    type Output = OperatorMatrix;
    fn mul(self, rhs: OperatorMatrix) -> OperatorMatrix {
        rhs.scaled(self)
    }
}

impl Neg for OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scaled(-1.0)
    }
}

/// Kronecker product `a ⊗ b`: entry `a[i,j]·b[k,l]` sits at
/// `(i·rows(b) + k, j·cols(b) + l)`.
/// Largest entry modulus of a raw complex matrix.
pub fn max_modulus(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Tensor product of one factor per subsystem, in basis order
/// (atom 1, atom 2, atom 3, cavity).
pub fn tensor_product(space: HilbertSpace, factors: &[DMatrix<C64>]) -> Result<OperatorMatrix> {
    let dims = space.subsystem_dims();
    if factors.len() != dims.len() {
        return Err(Error::invalid(format!(
            "expected {} tensor factors, got {}",
            dims.len(),
            factors.len()
        )));
    }
    for (factor, &d) in factors.iter().zip(dims.iter()) {
        if factor.nrows() != d || factor.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: factor.nrows().max(factor.ncols()),
            });
        }
    }
    let mut acc = factors[0].clone();
    for factor in &factors[1..] {
        acc = kron(&acc, factor);
    }
    OperatorMatrix::from_entries(space, acc)
}

fn ketbra(dim: usize, i: usize, j: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

/// `|i⟩ₘ⟨j|` on atom `m` (1-based), identity on every other factor.
pub fn atomic_transition_op(
    space: HilbertSpace,
    m: usize,
    i: usize,
    j: usize,
) -> Result<OperatorMatrix> {
    if !(1..=ATOM_COUNT).contains(&m) {
        return Err(Error::IndexOutOfRange {
            what: "atom",
            value: m,
            min: 1,
            max: ATOM_COUNT,
        });
    }
    for level in [i, j] {
        if level >= ATOM_LEVELS {
            return Err(Error::IndexOutOfRange {
                what: "atom level",
                value: level,
                min: 0,
                max: ATOM_LEVELS - 1,
            });
        }
    }
    let dims = space.subsystem_dims();
    let factors: Vec<DMatrix<C64>> = dims
        .iter()
        .enumerate()
        .map(|(slot, &d)| {
            if slot == m - 1 {
                ketbra(d, i, j)
            } else {
                DMatrix::identity(d, d)
            }
        })
        .collect();
    tensor_product(space, &factors)
}

/// Cavity annihilation operator `a` on the truncated ladder, identity on the atoms.
pub fn cavity_annihilation(space: HilbertSpace) -> Result<OperatorMatrix> {
    let n = space.cavity_dim();
    if n < 2 {
        return Err(Error::invalid("cavity annihilation needs cavity_dim >= 2"));
    }
    let a = DMatrix::from_fn(n, n, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let id = DMatrix::identity(ATOM_LEVELS, ATOM_LEVELS);
    tensor_product(space, &[id.clone(), id.clone(), id, a])
}

/// `N_exc = a†a + Σₘ |2⟩ₘ⟨2|`, diagonal in the product basis.
pub fn excitation_number(space: HilbertSpace) -> OperatorMatrix {
    OperatorMatrix::diagonal(space, |idx| {
        let label = space.decode(idx).expect("index in range");
        C64::new(label.excitations() as f64, 0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::BasisLabel;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_tensor_is_identity() {
        let space = HilbertSpace::default();
        let id3 = DMatrix::<C64>::identity(3, 3);
        let op = tensor_product(space, &[id3.clone(), id3.clone(), id3.clone(), id3]).unwrap();
        assert_eq!(op, OperatorMatrix::identity(space));
        assert_eq!(op.dim(), 81);
    }

    #[test]
    fn tensor_product_rejects_wrong_factor_dims() {
        let space = HilbertSpace::default();
        let id3 = DMatrix::<C64>::identity(3, 3);
        let id2 = DMatrix::<C64>::identity(2, 2);
        assert!(matches!(
            tensor_product(space, &[id3.clone(), id3.clone(), id3.clone(), id2]),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
        assert!(tensor_product(space, &[id3.clone(), id3]).is_err());
    }

    #[test]
    fn kron_matches_four_index_loop() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, -1.2), c(2.0, 0.5), c(-0.7, 0.1), c(1.1, 1.9)],
        );
        let b = DMatrix::from_row_slice(
            2,
            2,
            &[c(-0.4, 0.8), c(0.0, -2.5), c(1.5, 0.0), c(0.6, -0.3)],
        );
        let k = kron(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(i * 2 + p, j * 2 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_product_is_associative() {
        let a = DMatrix::from_fn(3, 3, |r, c| {
            C64::new((r * 3 + c) as f64, (r + 2 * c) as f64 * 0.5)
        });
        let b = DMatrix::from_fn(3, 3, |r, c| C64::new(r as f64 - c as f64, 1.0));
        let d = DMatrix::from_fn(2, 2, |r, c| C64::new(0.25 * (r + c) as f64, -(c as f64)));
        assert_eq!(kron(&kron(&a, &b), &d), kron(&a, &kron(&b, &d)));
    }

    #[test]
    fn raising_op_moves_single_basis_state() {
        let space = HilbertSpace::default();
        let op = atomic_transition_op(space, 1, 2, 1).unwrap();
        let ket = StateVector::basis(space, BasisLabel::new([1, 0, 0], 0)).unwrap();
        let expected = StateVector::basis(space, BasisLabel::new([2, 0, 0], 0)).unwrap();
        assert_eq!(op.apply(&ket).amplitudes(), expected.amplitudes());
    }

    #[test]
    fn ketbra_products_and_adjoints() {
        let space = HilbertSpace::default();
        let up = atomic_transition_op(space, 1, 2, 1).unwrap();
        let down = atomic_transition_op(space, 1, 1, 2).unwrap();
        assert_eq!(&up * &down, atomic_transition_op(space, 1, 2, 2).unwrap());
        for m in 1..=3 {
            assert_eq!(
                atomic_transition_op(space, m, 2, 0).unwrap().adjoint(),
                atomic_transition_op(space, m, 0, 2).unwrap()
            );
        }
    }

    #[test]
    fn level_projectors_are_complete() {
        let space = HilbertSpace::default();
        let mut sum = OperatorMatrix::zeros(space);
        for i in 0..3 {
            sum += &atomic_transition_op(space, 2, i, i).unwrap();
        }
        assert_eq!(sum, OperatorMatrix::identity(space));
    }

    #[test]
    fn transition_op_rejects_bad_indices() {
        let space = HilbertSpace::default();
        assert!(atomic_transition_op(space, 0, 1, 1).is_err());
        assert!(atomic_transition_op(space, 4, 1, 1).is_err());
        assert!(atomic_transition_op(space, 1, 3, 1).is_err());
        assert!(atomic_transition_op(space, 1, 1, 3).is_err());
    }

    #[test]
    fn annihilation_on_fock_ladder() {
        let space = HilbertSpace::default();
        let a = cavity_annihilation(space).unwrap();
        let vac = StateVector::basis(space, BasisLabel::new([0, 1, 0], 0)).unwrap();
        assert!(a.apply(&vac).norm() == 0.0);

        let two = StateVector::basis(space, BasisLabel::new([2, 0, 1], 2)).unwrap();
        let number = &a.adjoint() * &a;
        let out = number.apply(&two);
        for (x, y) in out.amplitudes().iter().zip(two.amplitudes().iter()) {
            assert!((x - y * 2.0).norm() < 1e-14);
        }
        assert!(cavity_annihilation(HilbertSpace::with_n_max(0)).is_err());
    }

    #[test]
    fn truncated_commutator_has_edge_artifact() {
        // [a, a†] = I − (n_max+1)|n_max⟩⟨n_max| once the ladder is cut off.
        for n_max in 1..=3 {
            let space = HilbertSpace::with_n_max(n_max);
            let a = cavity_annihilation(space).unwrap();
            let comm = a.commutator(&a.adjoint());
            for r in 0..space.total_dim() {
                let photons = space.decode(r).unwrap().photons;
                let expected = if photons == n_max {
                    -(n_max as f64)
                } else {
                    1.0
                };
                for col in 0..space.total_dim() {
                    let want = if r == col { expected } else { 0.0 };
                    assert!((comm.get(r, col) - C64::new(want, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn excitation_number_counts_photons_and_excited_atoms() {
        let space = HilbertSpace::default();
        let n = excitation_number(space);
        let ground = space.encode(BasisLabel::new([0, 0, 0], 0)).unwrap();
        assert_eq!(n.get(ground, ground), c(0.0, 0.0));
        let mixed = space.encode(BasisLabel::new([2, 0, 0], 1)).unwrap();
        assert_eq!(n.get(mixed, mixed), c(2.0, 0.0));

        let a = cavity_annihilation(space).unwrap();
        let mut built = &a.adjoint() * &a;
        for m in 1..=3 {
            built += &atomic_transition_op(space, m, 2, 2).unwrap();
        }
        assert!((&built - &n).max_abs() < 1e-15);
    }
}
