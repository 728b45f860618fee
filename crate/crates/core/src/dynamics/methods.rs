// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::composite::build_composite_hamiltonian;
use super::initial::InitialState;
use super::master::{integrate_master, MasterStats, StaticHamiltonian};
use super::population::raw_purity;
use super::rate::{integrate_generator, integrate_rate};
use super::schedule::Sampling;
use super::trajectory::{Method, Trajectory};
use crate::effective::{assemble_rate_matrix, effective_models, RateMatrix};
use crate::model::{
    build_hamiltonian, build_lindblad_set, ground_basis, GroundState, SystemParams, DRIVE_COUNT,
};
use crate::{Error, Result, C64};

/// Observation times `(T₁, T₂)` used to read rates off the per-drive full runs.
pub const FULL_INDEPENDENT_WINDOW: (f64, f64) = (50.0, 150.0);

/// A finished run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub trajectory: Trajectory,
    /// Present for methods that propagate a density matrix.
    pub stats: Option<MasterStats>,
}

pub fn simulate(
    method: Method,
    params: &SystemParams,
    initial: InitialState,
    sampling: &Sampling,
) -> Result<Simulation> {
    params.validate()?;
    match method {
        Method::Rate => Ok(Simulation {
            trajectory: simulate_rate(params, initial, sampling)?,
            stats: None,
        }),
        Method::FullTimeDependent => {
            let (trajectory, stats) = simulate_full_time_dependent(params, initial, sampling)?;
            Ok(Simulation {
                trajectory,
                stats: Some(stats),
            })
        }
        Method::FullIndependent => Ok(Simulation {
            trajectory: simulate_full_independent(params, initial, sampling)?,
            stats: None,
        }),
        Method::EffectiveMaster => {
            let (trajectory, stats) = simulate_effective_master(params, initial, sampling)?;
            Ok(Simulation {
                trajectory,
                stats: Some(stats),
            })
        }
    }
}

pub fn simulate_rate(
    params: &SystemParams,
    initial: InitialState,
    sampling: &Sampling,
) -> Result<Trajectory> {
    let mu = assemble_rate_matrix(params)?;
    integrate_rate(&initial.populations(), &mu, sampling)
}

fn dense_lindblads(params: &SystemParams) -> Result<Vec<DMatrix<C64>>> {
    Ok(build_lindblad_set(params)?
        .into_iter()
        .map(|ch| ch.op.into_entries())
        .collect())
}

/// Ground-state populations `⟨y|ρ|y⟩` from a full density matrix.
fn ground_populations(iso: &DMatrix<C64>, rho: &DMatrix<C64>) -> [f64; 8] {
    let reduced = iso.adjoint() * rho * iso;
    let mut p = [0.0; 8];
    for (y, slot) in p.iter_mut().enumerate() {
        *slot = reduced[(y, y)].re;
    }
    p
}

/// Full Lindblad run with all four drives and their relative phases.
pub fn simulate_full_time_dependent(
    params: &SystemParams,
    initial: InitialState,
    sampling: &Sampling,
) -> Result<(Trajectory, MasterStats)> {
    let space = params.space();
    let h = build_composite_hamiltonian(params)?;
    let lindblads = dense_lindblads(params)?;
    let rho0 = initial.density(space)?;
    let iso = ground_basis(space).isometry();
    let mut traj = Trajectory::new(Method::FullTimeDependent);
    let (_, stats) = integrate_master(rho0.entries(), &h, &lindblads, sampling, |t, rho| {
        let p = ground_populations(&iso, rho);
        traj.push(t, p, p[GroundState::TARGET.index()], raw_purity(rho));
        Ok(())
    })?;
    Ok((traj, stats))
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Principal square root by the Denman–Beavers iteration.
fn matrix_sqrt(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let singular = || Error::Degenerate("singular matrix in square-root iteration".into());
        let y_inv = y.clone().try_inverse().ok_or_else(singular)?;
        let z_inv = z.clone().try_inverse().ok_or_else(singular)?;
        let y_next = (&y + z_inv) * 0.5;
        let z_next = (&z + y_inv) * 0.5;
        let change = (&y_next - &y).amax();
        y = y_next;
        z = z_next;
        if change <= 1e-15 * y.amax() {
            return Ok(y);
        }
    }
    Err(Error::Degenerate(
        "square-root iteration did not converge".into(),
    ))
}

/// Principal matrix logarithm by inverse scaling and squaring: square roots
/// until `‖A − I‖₁ ≤ 0.25`, then the `log(I + X)` series.
fn matrix_log(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut m = a.clone();
    let mut halvings = 0u32;
    while one_norm(&(&m - &id)) > 0.25 {
        if halvings == 40 {
            return Err(Error::Degenerate(
                "matrix has no usable principal logarithm".into(),
            ));
        }
        m = matrix_sqrt(&m)?;
        halvings += 1;
    }
    let x = m - &id;
    let mut out = DMatrix::zeros(n, n);
    let mut power = x.clone();
    for j in 1..200 {
        let term = &power / j as f64;
        if j % 2 == 1 {
            out += &term;
        } else {
            out -= &term;
        }
        if term.amax() < 1e-18 {
            return Ok(out * 2f64.powi(halvings as i32));
        }
        power = &power * &x;
    }
    Err(Error::Degenerate("log series did not converge".into()))
}

/// Ground population matrix `M[z][y] = P_z(t)` after starting in `|y⟩⟨y|`,
/// for `t` in the window, under drive `k` alone.
fn population_maps(params: &SystemParams, k: usize, dt: f64) -> Result<[DMatrix<f64>; 2]> {
    let space = params.space();
    let (t1, t2) = FULL_INDEPENDENT_WINDOW;
    let h = StaticHamiltonian::new(build_hamiltonian(k, params)?.entries());
    let lindblads = dense_lindblads(params)?;
    let basis = ground_basis(space);
    let iso = basis.isometry();
    // Sample every T₁ so that both window ends fall on the output grid.
    let samples = (t2 / t1).round() as usize;
    debug_assert!((t2 / t1).fract() == 0.0);
    let sampling = Sampling::new(t2, dt, samples)?;
    let record_1 = 1usize;
    let columns: Vec<[Vec<f64>; 2]> = GroundState::ALL
        .par_iter()
        .map(|&y| {
            let psi = basis.state(y);
            let rho0 = psi.amplitudes() * psi.amplitudes().adjoint();
            let mut at = [Vec::new(), Vec::new()];
            let mut idx = 0usize;
            integrate_master(&rho0, &h, &lindblads, &sampling, |_, rho| {
                if idx == record_1 {
                    at[0] = ground_populations(&iso, rho).to_vec();
                } else if idx == samples {
                    at[1] = ground_populations(&iso, rho).to_vec();
                }
                idx += 1;
                Ok(())
            })?;
            Ok(at)
        })
        .collect::<Result<_>>()?;
    let build = |which: usize| DMatrix::from_fn(8, 8, |z, y| columns[y][which][z]);
    Ok([build(0), build(1)])
}

/// Rate matrix read off per-drive full Lindblad runs: for each drive the
/// generator is `log(M₂M₁⁻¹)/(T₂ − T₁)`, with negative off-diagonal
/// estimates clipped to zero, and the drives are summed.
pub fn extract_full_independent_rates(params: &SystemParams, dt: f64) -> Result<RateMatrix> {
    params.validate()?;
    let spacing = FULL_INDEPENDENT_WINDOW.1 - FULL_INDEPENDENT_WINDOW.0;
    let per_drive: Vec<DMatrix<f64>> = (1..=DRIVE_COUNT)
        .into_par_iter()
        .map(|k| {
            let [m1, m2] = population_maps(params, k, dt)?;
            let inv = m1.clone().try_inverse().ok_or_else(|| {
                Error::Degenerate(format!("population map of drive {k} is singular"))
            })?;
            Ok(matrix_log(&(m2 * inv))? / spacing)
        })
        .collect::<Result<_>>()?;
    let total = per_drive
        .iter()
        .fold(DMatrix::<f64>::zeros(8, 8), |acc, g| acc + g);
    Ok(RateMatrix::from_fn(|from, to| {
        total[(to.index(), from.index())].max(0.0)
    }))
}

pub fn simulate_full_independent(
    params: &SystemParams,
    initial: InitialState,
    sampling: &Sampling,
) -> Result<Trajectory> {
    let mu = extract_full_independent_rates(params, sampling.dt.min(DEFAULT_MASTER_DT))?;
    integrate_generator(
        &initial.populations(),
        &mu.generator(),
        &rate_sampling(sampling),
        Method::FullIndependent,
    )
}

/// Default master-equation step.
pub const DEFAULT_MASTER_DT: f64 = 0.02;
/// Default rate-equation step.
pub const DEFAULT_RATE_DT: f64 = 1.0;

/// Rate integration on the same output grid but with a step no finer than needed.
fn rate_sampling(s: &Sampling) -> Sampling {
    Sampling {
        dt: s.dt.max(DEFAULT_RATE_DT).min(s.t_end / s.samples as f64),
        ..*s
    }
}

/// Ground-manifold Lindblad equation with `Σₖ H_eff,k` and all 28 effective
/// jump operators; keeps the coherences that the rate model discards.
pub fn simulate_effective_master(
    params: &SystemParams,
    initial: InitialState,
    sampling: &Sampling,
) -> Result<(Trajectory, MasterStats)> {
    let models = effective_models(params)?;
    let mut h = DMatrix::<C64>::zeros(8, 8);
    let mut lindblads = Vec::with_capacity(models.len() * 7);
    for m in &models {
        h += &m.h_eff;
        lindblads.extend(m.l_eff.iter().map(|ch| ch.op.clone()));
    }
    let h = StaticHamiltonian::new(&h);
    let mut traj = Trajectory::new(Method::EffectiveMaster);
    let (_, stats) = integrate_master(
        &initial.ground_density(),
        &h,
        &lindblads,
        sampling,
        |t, rho| {
            let mut p = [0.0; 8];
            for (y, slot) in p.iter_mut().enumerate() {
                *slot = rho[(y, y)].re;
            }
            traj.push(t, p, p[GroundState::TARGET.index()], raw_purity(rho));
            Ok(())
        },
    )?;
    Ok((traj, stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expm(g: &DMatrix<f64>) -> DMatrix<f64> {
        // Taylor series of exp(g / 2^10), squared back up.
        let n = g.nrows();
        let small = g / 1024.0;
        let mut term = DMatrix::<f64>::identity(n, n);
        let mut e = term.clone();
        for j in 1..30 {
            term = &term * &small / j as f64;
            e += &term;
        }
        for _ in 0..10 {
            e = &e * &e;
        }
        e
    }

    #[test]
    fn log_inverts_exponential_of_a_generator() {
        let g = DMatrix::from_row_slice(3, 3, &[-0.9, 0.1, 0.3, 0.5, -0.4, 0.2, 0.4, 0.3, -0.5]);
        for scale in [0.1, 1.0, 3.0] {
            let l = matrix_log(&expm(&(&g * scale))).unwrap();
            assert!((l - &g * scale).amax() < 1e-11, "scale {scale}");
        }
    }

    #[test]
    fn square_root_squares_back() {
        let a = DMatrix::from_row_slice(2, 2, &[4.0, 1.0, 0.0, 9.0]);
        let r = matrix_sqrt(&a).unwrap();
        assert!((&r * &r - a).amax() < 1e-13);
        assert!(matrix_log(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn effective_master_tracks_rate_model() {
        let p = SystemParams::fig2(0.08);
        let s = Sampling::new(1500.0, 1.0, 10).unwrap();
        let rate = simulate_rate(&p, InitialState::Uniform, &s).unwrap();
        let (eff, stats) = simulate_effective_master(&p, InitialState::Uniform, &s).unwrap();
        for i in 0..rate.len() {
            assert!(
                (rate.fidelity[i] - eff.fidelity[i]).abs() < 1e-6,
                "t={}",
                rate.times[i]
            );
        }
        assert!(stats.max_trace_drift < 1e-9);
    }

    #[test]
    fn full_time_dependent_short_run_is_physical() {
        let p = SystemParams::fig2(0.04);
        let s = Sampling::new(20.0, 0.02, 4).unwrap();
        let sim = simulate(
            Method::FullTimeDependent,
            &p,
            InitialState::Haar { seed: 1 },
            &s,
        )
        .unwrap();
        let stats = sim.stats.unwrap();
        assert!(stats.max_trace_drift < 1e-9);
        assert!(stats.min_eigenvalue > -1e-6);
        assert_eq!(sim.trajectory.len(), 5);
    }
}
