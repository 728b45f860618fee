// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;

use super::schedule::Sampling;
use crate::operator::{hermiticity_deviation, min_eigenvalue, SparseOperator};
use crate::{Error, Result, C64};

/// Most negative eigenvalue tolerated at a sample point.
pub const POSITIVITY_FLOOR: f64 = -1e-6;
/// Tolerance on the initial state's trace.
const INITIAL_TRACE_TOLERANCE: f64 = 1e-9;

/// A Hamiltonian with a fixed sparsity pattern whose values may depend on time.
pub trait TimeDependentHamiltonian: Sync {
    fn dim(&self) -> usize;

    /// Positions of the entries, identical at all times. Repeats are summed.
    fn pattern(&self) -> &[(usize, usize)];

    /// Entry values at time `t`, in `pattern` order.
    fn values_at(&self, t: f64, values: &mut [C64]);

    fn is_static(&self) -> bool {
        false
    }

    /// Dense `H(t)`.
    fn dense_at(&self, t: f64) -> DMatrix<C64> {
        let n = self.dim();
        let pattern = self.pattern();
        let mut values = vec![C64::new(0.0, 0.0); pattern.len()];
        self.values_at(t, &mut values);
        let mut h = DMatrix::zeros(n, n);
        for (&(r, c), v) in pattern.iter().zip(values) {
            h[(r, c)] += v;
        }
        h
    }
}

/// A time-independent Hamiltonian.
#[derive(Debug, Clone)]
pub struct StaticHamiltonian {
    dim: usize,
    pattern: Vec<(usize, usize)>,
    values: Vec<C64>,
}

impl StaticHamiltonian {
    pub fn new(h: &DMatrix<C64>) -> Self {
        let op = SparseOperator::from_dense(h);
        Self {
            dim: op.dim(),
            pattern: op.triplets().iter().map(|&(r, c, _)| (r, c)).collect(),
            values: op.triplets().iter().map(|&(_, _, v)| v).collect(),
        }
    }
}

impl TimeDependentHamiltonian for StaticHamiltonian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn pattern(&self) -> &[(usize, usize)] {
        &self.pattern
    }

    fn values_at(&self, _t: f64, values: &mut [C64]) {
        values.copy_from_slice(&self.values);
    }

    fn is_static(&self) -> bool {
        true
    }
}

/// Health of a master-equation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterStats {
    pub steps: usize,
    /// Largest `|Tr ρ − Tr ρ₀|` seen at any step.
    pub max_trace_drift: f64,
    /// Largest `max|ρ − ρ†|` removed by re-symmetrization in one step.
    pub max_hermiticity_deviation: f64,
    /// Smallest eigenvalue over the sample points.
    pub min_eigenvalue: f64,
}

/// `A = −i H_NH(t)`, with the damping folded in, stored as one entry list
/// with a fixed pattern.
struct Generator<'a> {
    h: &'a dyn TimeDependentHamiltonian,
    n: usize,
    positions: Vec<(usize, usize)>,
    /// `−i·(−(i/2)ΣL†L) = −½ΣL†L` per slot.
    damping: Vec<C64>,
    /// Slot of each Hamiltonian pattern entry.
    slot_of: Vec<usize>,
    h_values: Vec<C64>,
    /// Conjugated slot values, ready for `ρA†`.
    conj_values: Vec<C64>,
    current: Option<f64>,
    rho_re: Vec<f64>,
    rho_im: Vec<f64>,
    y_re: Vec<f64>,
    y_im: Vec<f64>,
}

impl<'a> Generator<'a> {
    fn new(h: &'a dyn TimeDependentHamiltonian, damping: &DMatrix<C64>) -> Self {
        let n = h.dim();
        let mut positions: Vec<(usize, usize)> = h.pattern().to_vec();
        for c in 0..n {
            for r in 0..n {
                if damping[(r, c)] != C64::new(0.0, 0.0) {
                    positions.push((r, c));
                }
            }
        }
        // Column-major order walks rho one column at a time.
        positions.sort_unstable_by_key(|&(r, c)| (c, r));
        positions.dedup();
        let slot = |p: (usize, usize)| {
            positions
                .binary_search_by_key(&(p.1, p.0), |&(r, c)| (c, r))
                .expect("position collected")
        };
        let damping_values = positions
            .iter()
            .map(|&(r, c)| C64::new(0.0, -1.0) * damping[(r, c)])
            .collect();
        let slot_of = h.pattern().iter().map(|&p| slot(p)).collect();
        let len = positions.len();
        Self {
            h,
            n,
            positions,
            damping: damping_values,
            slot_of,
            h_values: vec![C64::new(0.0, 0.0); h.pattern().len()],
            conj_values: vec![C64::new(0.0, 0.0); len],
            current: None,
            rho_re: vec![0.0; n * n],
            rho_im: vec![0.0; n * n],
            y_re: vec![0.0; n * n],
            y_im: vec![0.0; n * n],
        }
    }

    fn refresh(&mut self, t: f64) {
        if self.current == Some(t) || (self.h.is_static() && self.current.is_some()) {
            return;
        }
        self.h.values_at(t, &mut self.h_values);
        self.conj_values.copy_from_slice(&self.damping);
        let minus_i = C64::new(0.0, -1.0);
        for (&s, &v) in self.slot_of.iter().zip(&self.h_values) {
            self.conj_values[s] += minus_i * v;
        }
        for v in &mut self.conj_values {
            *v = v.conj();
        }
        self.current = Some(t);
    }

    /// `Y = ρ A†`, column by column: `Y[:, r] += conj(A[r, c]) ρ[:, c]`.
    /// Only valid for Hermitian `ρ`, where `A ρ = (ρ A†)†`. Real and
    /// imaginary parts are kept in separate planes so the inner loop is a
    /// plain real axpy.
    fn apply_right_adjoint(&mut self, rho: &[C64]) {
        let n = self.n;
        for (i, z) in rho.iter().enumerate() {
            self.rho_re[i] = z.re;
            self.rho_im[i] = z.im;
        }
        self.y_re.fill(0.0);
        self.y_im.fill(0.0);
        for (&(r, c), &w) in self.positions.iter().zip(&self.conj_values) {
            let (xr, xi) = (
                &self.rho_re[c * n..(c + 1) * n],
                &self.rho_im[c * n..(c + 1) * n],
            );
            let (yr, yi) = (
                &mut self.y_re[r * n..(r + 1) * n],
                &mut self.y_im[r * n..(r + 1) * n],
            );
            for (((yr, yi), &xr), &xi) in yr.iter_mut().zip(yi.iter_mut()).zip(xr).zip(xi) {
                *yr += w.re * xr - w.im * xi;
                *yi += w.re * xi + w.im * xr;
            }
        }
    }
}

struct Liouvillian<'a> {
    generator: Generator<'a>,
    lindblads: Vec<SparseOperator>,
}

impl<'a> Liouvillian<'a> {
    fn new(h: &'a dyn TimeDependentHamiltonian, lindblads: &[DMatrix<C64>]) -> Result<Self> {
        let n = h.dim();
        let mut sum = DMatrix::<C64>::zeros(n, n);
        for l in lindblads {
            if l.nrows() != n || l.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: l.nrows(),
                });
            }
            sum += l.adjoint() * l;
        }
        Ok(Self {
            generator: Generator::new(h, &(sum * C64::new(0.0, -0.5))),
            lindblads: lindblads.iter().map(SparseOperator::from_dense).collect(),
        })
    }

    /// `dρ/dt = −i(H_NH ρ − ρ H_NH†) + Σ LρL†` with `H_NH = H − (i/2)ΣL†L`.
    fn rhs(&mut self, t: f64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let n = self.generator.n;
        self.generator.refresh(t);
        self.generator.apply_right_adjoint(rho.as_slice());
        let (yr, yi) = (&self.generator.y_re, &self.generator.y_im);
        let o = out.as_mut_slice();
        for j in 0..n {
            for i in 0..n {
                let (a, b) = (j * n + i, i * n + j);
                o[a] = C64::new(yr[a] + yr[b], yi[a] - yi[b]);
            }
        }
        let r = rho.as_slice();
        for l in &self.lindblads {
            for &(b, d, w) in l.triplets() {
                let wc = w.conj();
                for &(a, c, v) in l.triplets() {
                    o[b * n + a] += v * r[d * n + c] * wc;
                }
            }
        }
    }
}

/// Replaces `ρ` by `(ρ + ρ†)/2` and returns the removed deviation.
fn symmetrize(rho: &mut DMatrix<C64>) -> f64 {
    let n = rho.nrows();
    let s = rho.as_mut_slice();
    let mut worst = 0.0f64;
    for j in 0..n {
        s[j * n + j].im = 0.0;
        for i in (j + 1)..n {
            let a = s[j * n + i];
            let b = s[i * n + j];
            worst = worst.max((a - b.conj()).norm());
            let m = (a + b.conj()) * 0.5;
            s[j * n + i] = m;
            s[i * n + j] = m.conj();
        }
    }
    worst
}

/// `y += a·x`.
fn axpy(y: &mut DMatrix<C64>, a: C64, x: &DMatrix<C64>) {
    for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *yi += a * xi;
    }
}

fn real_trace(m: &DMatrix<C64>) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// RK4 propagation of the Lindblad equation. `observe` is called at every
/// sample time, including `t = 0`, after the positivity check.
pub fn integrate_master(
    rho0: &DMatrix<C64>,
    h: &dyn TimeDependentHamiltonian,
    lindblads: &[DMatrix<C64>],
    sampling: &Sampling,
    mut observe: impl FnMut(f64, &DMatrix<C64>) -> Result<()>,
) -> Result<(DMatrix<C64>, MasterStats)> {
    sampling.validate()?;
    let n = h.dim();
    if rho0.nrows() != n || rho0.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.nrows(),
        });
    }
    let tr0 = real_trace(rho0);
    if (tr0 - 1.0).abs() > INITIAL_TRACE_TOLERANCE || hermiticity_deviation(rho0) > 1e-12 {
        return Err(Error::invalid(
            "initial density matrix must be Hermitian with unit trace",
        ));
    }
    let mut liou = Liouvillian::new(h, lindblads)?;
    let (steps, dt) = sampling.interval_steps();
    let times = sampling.times();

    let mut stats = MasterStats {
        steps: 0,
        max_trace_drift: 0.0,
        max_hermiticity_deviation: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    let mut check = |t: f64, rho: &DMatrix<C64>, stats: &mut MasterStats| -> Result<()> {
        let lam = min_eigenvalue(rho);
        stats.min_eigenvalue = stats.min_eigenvalue.min(lam);
        if lam < POSITIVITY_FLOOR {
            return Err(Error::PositivityViolation {
                time: t,
                min_eigenvalue: lam,
            });
        }
        observe(t, rho)
    };

    let zero = DMatrix::<C64>::zeros(n, n);
    let mut rho = rho0.clone();
    let (mut k1, mut k2, mut k3, mut k4) = (zero.clone(), zero.clone(), zero.clone(), zero.clone());
    let mut stage = zero;
    check(times[0], &rho, &mut stats)?;

    let (half, sixth) = (C64::from(dt / 2.0), C64::from(dt / 6.0));
    for (i, &t_sample) in times.iter().enumerate().skip(1) {
        let t_start = times[i - 1];
        for s in 0..steps {
            let t = t_start + s as f64 * dt;
            liou.rhs(t, &rho, &mut k1);
            stage.copy_from(&rho);
            axpy(&mut stage, half, &k1);
            liou.rhs(t + dt / 2.0, &stage, &mut k2);
            stage.copy_from(&rho);
            axpy(&mut stage, half, &k2);
            liou.rhs(t + dt / 2.0, &stage, &mut k3);
            stage.copy_from(&rho);
            axpy(&mut stage, C64::from(dt), &k3);
            liou.rhs(t + dt, &stage, &mut k4);
            k2 += &k3;
            axpy(&mut k1, C64::from(2.0), &k2);
            k1 += &k4;
            axpy(&mut rho, sixth, &k1);

            let dev = symmetrize(&mut rho);
            stats.max_hermiticity_deviation = stats.max_hermiticity_deviation.max(dev);
            stats.max_trace_drift = stats.max_trace_drift.max((real_trace(&rho) - tr0).abs());
            stats.steps += 1;
        }
        if !rho.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::StepSizeRejected(format!(
                "state diverged before t = {t_sample}"
            )));
        }
        check(t_sample, &rho, &mut stats)?;
    }
    Ok((rho, stats))
}
