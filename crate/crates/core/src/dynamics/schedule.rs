// SPDX-License-Identifier: Apache-2.0

use crate::{Error, Result};

/// Integration horizon and output grid. Output times are `i·t_end/samples`;
/// each interval is covered by equal steps no longer than `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub t_end: f64,
    pub dt: f64,
    pub samples: usize,
}

impl Sampling {
    pub fn new(t_end: f64, dt: f64, samples: usize) -> Result<Self> {
        let s = Self { t_end, dt, samples };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::invalid(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.samples)
            .map(|i| self.t_end * i as f64 / self.samples as f64)
            .collect()
    }

    /// Number of steps and step length for one output interval.
    pub(crate) fn interval_steps(&self) -> (usize, f64) {
        let interval = self.t_end / self.samples as f64;
        let n = ((interval / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (n, interval / n as f64)
    }
}
