// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::sweep::{SweepAxis, SweepResult};
use crate::{Error, Result};

pub const MIN_FIT_POINTS: usize = 3;

/// `1 − F ≈ a/C`, fitted through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub coefficient: f64,
    /// RMS of `(1 − Fᵢ) − a/Cᵢ`.
    pub residual: f64,
    /// Mean of `1 − Fᵢ`, the scale the residual is judged against.
    pub mean_infidelity: f64,
    pub points_used: usize,
}

impl FitResult {
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.mean_infidelity
    }
}

impl fmt::Display for FitResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "a={:.6} residual_rms={:.6e} relative_residual={:.4} points={}",
            self.coefficient,
            self.residual,
            self.relative_residual(),
            self.points_used
        )
    }
}

/// Least squares for `1 − F = a/C`: `a = Σ[(1−Fᵢ)/Cᵢ] / Σ[1/Cᵢ²]`.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < MIN_FIT_POINTS {
        return Err(Error::invalid(format!(
            "the fit needs at least {MIN_FIT_POINTS} points, got {}",
            points.len()
        )));
    }
    if let Some((c, f)) = points
        .iter()
        .find(|(c, f)| !(*c > 0.0 && c.is_finite() && f.is_finite()))
    {
        return Err(Error::invalid(format!(
            "fit point (C={c}, F={f}) needs finite F and C > 0"
        )));
    }
    let (num, den) = points.iter().fold((0.0, 0.0), |(n, d), (c, f)| {
        (n + (1.0 - f) / c, d + 1.0 / (c * c))
    });
    let a = num / den;
    if a.is_nan() || a <= 0.0 {
        return Err(Error::invalid(format!(
            "fitted coefficient {a} is not positive"
        )));
    }
    let n = points.len() as f64;
    let sq: f64 = points.iter().map(|(c, f)| (1.0 - f - a / c).powi(2)).sum();
    let mean = points.iter().map(|(_, f)| 1.0 - f).sum::<f64>() / n;
    Ok(FitResult {
        coefficient: a,
        residual: (sq / n).sqrt(),
        mean_infidelity: mean,
        points_used: points.len(),
    })
}

/// `(C, F)` pairs from a cooperativity sweep, skipping NaN rows.
pub fn fit_points(sweep: &SweepResult) -> Result<Vec<(f64, f64)>> {
    if let Some(r) = sweep
        .rows
        .iter()
        .find(|r| r.axis != SweepAxis::Cooperativity)
    {
        return Err(Error::invalid(format!(
            "the fit needs a cooperativity sweep, found axis {}",
            r.axis
        )));
    }
    Ok(sweep
        .rows
        .iter()
        .filter(|r| r.is_ok() && r.fidelity.is_finite())
        .map(|r| (r.value, r.fidelity))
        .collect())
}
