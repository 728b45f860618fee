// SPDX-License-Identifier: Apache-2.0

use std::fmt::{self, Write as _};
use std::path::Path;

use rayon::prelude::*;

use crate::dynamics::rate_steady_state;
use crate::effective::assemble_rate_matrix;
use crate::model::SystemParams;
use crate::{Error, Result};

/// Environment variable holding the worker count for sweeps.
pub const WORKERS_ENV: &str = "WSTATE_WORKERS";

pub const SWEEP_HEADER: &str = "axis,value,fidelity,purity,reason";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Cooperativity,
    GammaOverKappa,
    /// `Ω₁/g`, the rest of the drive pattern scaled along.
    OmegaOverG,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 3] = [
        SweepAxis::Cooperativity,
        SweepAxis::GammaOverKappa,
        SweepAxis::OmegaOverG,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Cooperativity => "cooperativity",
            SweepAxis::GammaOverKappa => "gamma_over_kappa",
            SweepAxis::OmegaOverG => "omega_over_g",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown sweep axis `{s}`")))
    }

    /// `params` with this axis set to `value`.
    pub fn apply(self, params: &SystemParams, value: f64) -> Result<SystemParams> {
        match self {
            SweepAxis::Cooperativity => params.with_cooperativity(value),
            SweepAxis::GammaOverKappa => params.with_gamma_over_kappa(value),
            SweepAxis::OmegaOverG => params.with_omega(value * params.g),
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grid along one axis over otherwise fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub fixed: SystemParams,
}

impl SweepSpec {
    /// `points` evenly spaced values from `from` to `to` inclusive.
    pub fn linear(
        axis: SweepAxis,
        from: f64,
        to: f64,
        points: usize,
        fixed: SystemParams,
    ) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid(format!(
                "a sweep needs at least 2 points, got {points}"
            )));
        }
        if from.is_nan() || to.is_nan() || from >= to {
            return Err(Error::invalid(format!(
                "sweep range must have from < to, got {from} .. {to}"
            )));
        }
        let step = (to - from) / (points - 1) as f64;
        let values = (0..points)
            .map(|i| {
                if i + 1 == points {
                    to
                } else {
                    from + step * i as f64
                }
            })
            .collect();
        let spec = Self {
            axis,
            values,
            fixed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// An explicit grid, kept in the given order.
    pub fn explicit(axis: SweepAxis, values: Vec<f64>, fixed: SystemParams) -> Result<Self> {
        let spec = Self {
            axis,
            values,
            fixed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("sweep grid is empty"));
        }
        if let Some(v) = self.values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!(
                "{} must be positive, got {v}",
                self.axis
            )));
        }
        self.fixed.validate()
    }
}

/// One sweep point; failed points carry NaN metrics and a reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub fidelity: f64,
    pub purity: f64,
    pub reason: Option<String>,
}

impl SweepRow {
    pub fn is_ok(&self) -> bool {
        self.reason.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_HEADER);
        out.push('\n');
        for r in &self.rows {
            let reason = r
                .reason
                .as_deref()
                .unwrap_or("")
                .replace([',', '\n', '\r'], ";");
            let _ = writeln!(
                out,
                "{},{:.8e},{:.8e},{:.8e},{}",
                r.axis, r.value, r.fidelity, r.purity, reason
            );
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, h)) if h.trim() == SWEEP_HEADER => {}
            Some((i, h)) => {
                return Err(Error::Config {
                    line: i + 1,
                    message: format!("expected header `{SWEEP_HEADER}`, found {h:?}"),
                })
            }
            None => return Err(Error::invalid("sweep CSV is empty")),
        }
        let rows = lines
            .map(|(i, l)| {
                let bad = |message: String| Error::Config {
                    line: i + 1,
                    message,
                };
                let cols: Vec<&str> = l.splitn(5, ',').collect();
                if cols.len() != 5 {
                    return Err(bad(format!("expected 5 columns, found {}", cols.len())));
                }
                let num = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| bad(format!("not a number: {s:?}")))
                };
                let reason = cols[4].trim();
                Ok(SweepRow {
                    axis: SweepAxis::parse(cols[0].trim()).map_err(|e| bad(e.to_string()))?,
                    value: num(cols[1])?,
                    fidelity: num(cols[2])?,
                    purity: num(cols[3])?,
                    reason: (!reason.is_empty()).then(|| reason.to_string()),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_csv(&text)
    }
}

/// Worker count from [`WORKERS_ENV`], if set to a positive integer.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::invalid(format!(
                "{WORKERS_ENV} must be a positive integer, got {s:?}"
            ))),
        },
    }
}

fn sweep_point(spec: &SweepSpec, value: f64) -> SweepRow {
    let outcome = spec
        .axis
        .apply(&spec.fixed, value)
        .and_then(|p| assemble_rate_matrix(&p))
        .and_then(|mu| rate_steady_state(&mu));
    match outcome {
        Ok(p) => SweepRow {
            axis: spec.axis,
            value,
            fidelity: p.fidelity(),
            purity: p.purity(),
            reason: None,
        },
        Err(e) => SweepRow {
            axis: spec.axis,
            value,
            fidelity: f64::NAN,
            purity: f64::NAN,
            reason: Some(e.to_string()),
        },
    }
}

/// Steady-state fidelity and purity of the rate model at every grid point.
///
/// Points run in parallel on `workers` threads (rayon's default when `None`);
/// rows come back in grid order. A failing point becomes a NaN row.
pub fn run_sweep(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepResult> {
    spec.validate()?;
    let job = || SweepResult {
        rows: spec
            .values
            .par_iter()
            .map(|&v| sweep_point(spec, v))
            .collect(),
    };
    match workers {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}
