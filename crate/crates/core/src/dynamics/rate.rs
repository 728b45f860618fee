// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector};

use super::population::PopulationVector;
use super::schedule::Sampling;
use super::trajectory::{Method, Trajectory};
use crate::effective::RateMatrix;
use crate::{Error, Result};

/// Largest accepted `‖G‖₁·dt` for the explicit rate integrator.
pub const RATE_STEP_LIMIT: f64 = 0.1;
/// Singular values below this fraction of the largest count as kernel.
pub const KERNEL_TOLERANCE: f64 = 1e-10;
/// Maximum accepted `‖G p_ss‖_max`.
pub const STEADY_RESIDUAL_LIMIT: f64 = 1e-12;

fn one_norm(g: &DMatrix<f64>) -> f64 {
    g.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn rk4_step(g: &DMatrix<f64>, p: &DVector<f64>, h: f64) -> DVector<f64> {
    let k1 = g * p;
    let k2 = g * (p + &k1 * (h / 2.0));
    let k3 = g * (p + &k2 * (h / 2.0));
    let k4 = g * (p + &k3 * h);
    p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Integrates `dP/dt = G P` for an arbitrary generator with zero column sums.
pub(crate) fn integrate_generator(
    p0: &PopulationVector,
    g: &DMatrix<f64>,
    sampling: &Sampling,
    method: Method,
) -> Result<Trajectory> {
    sampling.validate()?;
    let norm = one_norm(g);
    if norm * sampling.dt > RATE_STEP_LIMIT {
        return Err(Error::StepSizeRejected(format!(
            "|G|*dt = {:.3e} exceeds {RATE_STEP_LIMIT}",
            norm * sampling.dt
        )));
    }
    let (steps, h) = sampling.interval_steps();
    let mut p = DVector::from_row_slice(p0.as_array());
    let mut traj = Trajectory::new(method);
    let record = |traj: &mut Trajectory, t: f64, p: &DVector<f64>| {
        let mut arr = [0.0; 8];
        arr.copy_from_slice(p.as_slice());
        let fidelity = arr[crate::model::GroundState::TARGET.index()];
        let purity = arr.iter().map(|x| x * x).sum();
        traj.push(t, arr, fidelity, purity);
    };
    let times = sampling.times();
    record(&mut traj, times[0], &p);
    for &t in &times[1..] {
        for _ in 0..steps {
            p = rk4_step(g, &p, h);
        }
        record(&mut traj, t, &p);
    }
    Ok(traj)
}

/// RK4 integration of the rate equations from `p0`.
pub fn integrate_rate(
    p0: &PopulationVector,
    mu: &RateMatrix,
    sampling: &Sampling,
) -> Result<Trajectory> {
    integrate_generator(p0, &mu.generator(), sampling, Method::Rate)
}

/// Normalized kernel vector of a generator.
pub(crate) fn generator_steady_state(g: &DMatrix<f64>) -> Result<PopulationVector> {
    let svd = g.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let max_sv = svd.singular_values.max();
    if max_sv == 0.0 {
        return Err(Error::NonUniqueSteadyState {
            kernel_dim: g.ncols(),
        });
    }
    let kernel: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= KERNEL_TOLERANCE * max_sv)
        .collect();
    if kernel.len() != 1 {
        return Err(Error::NonUniqueSteadyState {
            kernel_dim: kernel.len(),
        });
    }
    let v = v_t.row(kernel[0]).transpose();
    let sum: f64 = v.iter().sum();
    if sum.abs() < 1e-300 {
        return Err(Error::Degenerate(
            "kernel vector has zero total population".into(),
        ));
    }
    let p = v / sum;
    let residual = (g * &p).amax();
    if residual > STEADY_RESIDUAL_LIMIT {
        return Err(Error::Degenerate(format!(
            "steady-state residual {residual:e}"
        )));
    }
    let mut arr = [0.0; 8];
    arr.copy_from_slice(p.as_slice());
    PopulationVector::new(arr)
}

/// Unique stationary populations of the rate equations.
pub fn rate_steady_state(mu: &RateMatrix) -> Result<PopulationVector> {
    generator_steady_state(&mu.generator())
}
