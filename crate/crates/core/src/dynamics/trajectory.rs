// SPDX-License-Identifier: Apache-2.0

use std::fmt::{self, Write as _};
use std::io::Write;
use std::path::Path;

use crate::model::GroundState;
use crate::{Error, Result};

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Rate equations on the assembled effective rate matrix.
    Rate,
    /// Full Lindblad equation with all four drives and their relative phases.
    FullTimeDependent,
    /// Rates extracted from per-drive full Lindblad runs, then integrated.
    FullIndependent,
    /// Lindblad equation on the ground manifold with the effective operators.
    EffectiveMaster,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Rate,
        Method::FullTimeDependent,
        Method::FullIndependent,
        Method::EffectiveMaster,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Rate => "rate",
            Method::FullTimeDependent => "full_time_dependent",
            Method::FullIndependent => "full_independent",
            Method::EffectiveMaster => "effective_master",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown method `{s}`")))
    }

    /// What the purity column means for this method.
    pub fn purity_definition(self) -> &'static str {
        match self {
            Method::Rate | Method::FullIndependent => {
                "sum of squared ground populations (diagonal ground density)"
            }
            Method::FullTimeDependent => "Tr(rho^2) over the full atom-cavity space",
            Method::EffectiveMaster => "Tr(rho^2) of the 8-dimensional ground density",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const TRAJECTORY_HEADER: &str =
    "t,p_000,p_s11,p_s12,p_s13,p_s21,p_s22,p_s23,p_111,fidelity,purity";

/// Sampled time series. In the full methods the ground populations omit the
/// small weight held by the excited manifold, so they need not sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub times: Vec<f64>,
    pub populations: Vec<[f64; 8]>,
    pub fidelity: Vec<f64>,
    pub purity: Vec<f64>,
}

impl Trajectory {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            times: Vec::new(),
            populations: Vec::new(),
            fidelity: Vec::new(),
            purity: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, t: f64, populations: [f64; 8], fidelity: f64, purity: f64) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.times.push(t);
        self.populations.push(populations);
        self.fidelity.push(fidelity);
        self.purity.push(purity);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_fidelity(&self) -> Option<f64> {
        self.fidelity.last().copied()
    }

    pub fn final_purity(&self) -> Option<f64> {
        self.purity.last().copied()
    }

    /// Linear interpolation of the fidelity; `None` outside the sampled range.
    pub fn fidelity_at(&self, t: f64) -> Option<f64> {
        let i = self.times.partition_point(|&s| s < t);
        if i == self.times.len() {
            return None;
        }
        if self.times[i] == t {
            return Some(self.fidelity[i]);
        }
        if i == 0 {
            return None;
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let w = (t - t0) / (t1 - t0);
        Some(self.fidelity[i - 1] * (1.0 - w) + self.fidelity[i] * w)
    }

    /// First sampled time with fidelity at least `level`.
    pub fn first_time_reaching(&self, level: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.fidelity)
            .find(|(_, &f)| f >= level)
            .map(|(&t, _)| t)
    }

    pub fn population(&self, sample: usize, state: GroundState) -> f64 {
        self.populations[sample][state.index()]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# method={} purity={}",
            self.method,
            self.method.purity_definition()
        );
        out.push_str(TRAJECTORY_HEADER);
        out.push('\n');
        for i in 0..self.len() {
            let _ = write!(out, "{:.8e}", self.times[i]);
            for p in &self.populations[i] {
                let _ = write!(out, ",{p:.8e}");
            }
            let _ = writeln!(out, ",{:.8e},{:.8e}", self.fidelity[i], self.purity[i]);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        let mut t = Trajectory::new(Method::Rate);
        t.push(0.0, [0.125; 8], 0.125, 0.125);
        t.push(10.0, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0], 1.0, 1.0);
        t
    }

    #[test]
    fn csv_schema() {
        let csv = sample().to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert!(lines[0].starts_with("# method=rate purity="));
        assert_eq!(lines[1], TRAJECTORY_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[2].split(',').count(), 11);
        assert!(lines[2].starts_with("0.00000000e0,1.25000000e-1"));
    }

    #[test]
    fn interpolation_and_threshold() {
        let t = sample();
        assert_eq!(t.fidelity_at(0.0), Some(0.125));
        assert!((t.fidelity_at(5.0).unwrap() - 0.5625).abs() < 1e-15);
        assert_eq!(t.fidelity_at(11.0), None);
        assert_eq!(t.first_time_reaching(0.9), Some(10.0));
        assert_eq!(t.first_time_reaching(1.1), None);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
        }
        assert!(Method::parse("both").is_err());
    }
}
