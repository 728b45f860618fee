// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::dynamics::{InitialState, Method, Sampling, DEFAULT_MASTER_DT, DEFAULT_RATE_DT};
use crate::model::{SystemParams, DRIVE_COUNT};
use crate::{Error, Result};

/// What `simulate` should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Single(Method),
    /// The rate model and the full time-dependent master equation side by side.
    Both,
}

impl MethodChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(MethodChoice::Both),
            other => Method::parse(other).map(MethodChoice::Single),
        }
    }

    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Single(m) => vec![m],
            MethodChoice::Both => vec![Method::Rate, Method::FullTimeDependent],
        }
    }
}

impl fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodChoice::Single(m) => m.fmt(f),
            MethodChoice::Both => f.write_str("both"),
        }
    }
}

pub const DEFAULT_T_END: f64 = 6000.0;
pub const DEFAULT_SAMPLES: usize = 20;

/// Keys understood by [`RunConfig::parse`].
pub const CONFIG_KEYS: &[&str] = &[
    "preset",
    "cooperativity",
    "gamma_over_kappa",
    "omega",
    "kappa",
    "gamma",
    "omega1",
    "omega2",
    "omega3",
    "omega4",
    "delta1",
    "delta2",
    "delta3",
    "delta4",
    "n_max",
    "branching_to_zero",
    "method",
    "t_end",
    "dt",
    "samples",
    "initial",
    "output",
];

/// A fully resolved run request.
///
/// Parameters are applied in a fixed order whatever the order of the lines:
/// the preset, then `cooperativity` / `gamma_over_kappa` / `omega`, then the
/// per-quantity keys.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: SystemParams,
    pub preset: String,
    pub method: MethodChoice,
    pub t_end: f64,
    /// `None` picks the method's default step.
    pub dt: Option<f64>,
    pub samples: usize,
    pub initial: InitialState,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: SystemParams::preset("fig2").expect("built-in preset"),
            preset: "fig2".into(),
            method: MethodChoice::Single(Method::Rate),
            t_end: DEFAULT_T_END,
            dt: None,
            samples: DEFAULT_SAMPLES,
            initial: InitialState::Uniform,
            output: None,
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, found {content:?}"),
            })?;
            let key = key.trim();
            let Some(&known) = CONFIG_KEYS.iter().find(|k| **k == key) else {
                return Err(Error::Config {
                    line,
                    message: format!("unknown key {key:?}"),
                });
            };
            let value = value.trim().to_string();
            if value.is_empty() {
                return Err(Error::Config {
                    line,
                    message: format!("empty value for {key}"),
                });
            }
            if let Some(prev) = entries.insert(known, Entry { line, value }) {
                return Err(Error::Config {
                    line,
                    message: format!("{key} already set on line {}", prev.line),
                });
            }
        }
        let mut cfg = Self::default();
        cfg.apply(&entries)?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, entries: &BTreeMap<&str, Entry>) -> Result<()> {
        let num = |key: &str| -> Result<Option<(usize, f64)>> {
            entries
                .get(key)
                .map(|e| {
                    e.value
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .map(|v| (e.line, v))
                        .ok_or_else(|| Error::Config {
                            line: e.line,
                            message: format!("{key} must be a finite number, got {:?}", e.value),
                        })
                })
                .transpose()
        };
        let at = |line: usize| {
            move |e: Error| Error::Config {
                line,
                message: e.to_string(),
            }
        };

        if let Some(e) = entries.get("preset") {
            self.params = SystemParams::preset(&e.value).map_err(at(e.line))?;
            self.preset = e.value.clone();
        }
        if let Some((line, c)) = num("cooperativity")? {
            self.params = self.params.with_cooperativity(c).map_err(at(line))?;
        }
        if let Some((line, r)) = num("gamma_over_kappa")? {
            self.params = self.params.with_gamma_over_kappa(r).map_err(at(line))?;
        }
        if let Some((line, o)) = num("omega")? {
            self.params = self.params.with_omega(o).map_err(at(line))?;
        }
        if let Some((_, v)) = num("kappa")? {
            self.params.kappa = v;
        }
        if let Some((_, v)) = num("gamma")? {
            self.params.gamma = v;
        }
        for k in 1..=DRIVE_COUNT {
            if let Some((_, v)) = num(&format!("omega{k}"))? {
                self.params.omegas[k - 1] = v;
            }
            if let Some((_, v)) = num(&format!("delta{k}"))? {
                self.params.deltas[k - 1] = v;
            }
        }
        if let Some((_, v)) = num("branching_to_zero")? {
            self.params.branching_to_zero = v;
        }
        if let Some(e) = entries.get("n_max") {
            self.params.n_max = e.value.parse().map_err(|_| Error::Config {
                line: e.line,
                message: format!("n_max must be a nonnegative integer, got {:?}", e.value),
            })?;
        }
        if let Some(e) = entries.get("method") {
            self.method = MethodChoice::parse(&e.value).map_err(at(e.line))?;
        }
        if let Some((_, v)) = num("t_end")? {
            self.t_end = v;
        }
        if let Some((_, v)) = num("dt")? {
            self.dt = Some(v);
        }
        if let Some(e) = entries.get("samples") {
            self.samples = e.value.parse().map_err(|_| Error::Config {
                line: e.line,
                message: format!("samples must be a positive integer, got {:?}", e.value),
            })?;
        }
        if let Some(e) = entries.get("initial") {
            self.initial = InitialState::parse(&e.value).map_err(at(e.line))?;
        }
        if let Some(e) = entries.get("output") {
            self.output = Some(PathBuf::from(&e.value));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        for m in self.method.methods() {
            self.sampling(m)?;
        }
        Ok(())
    }

    /// Output grid for `method`, using its default step unless `dt` is set.
    pub fn sampling(&self, method: Method) -> Result<Sampling> {
        let dt = self.dt.unwrap_or(match method {
            Method::Rate | Method::FullIndependent => DEFAULT_RATE_DT,
            Method::FullTimeDependent | Method::EffectiveMaster => DEFAULT_MASTER_DT,
        });
        Sampling::new(self.t_end, dt, self.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_fig2_rate_run() {
        let cfg = RunConfig::parse("# nothing\n\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.sampling(Method::Rate).unwrap().dt, DEFAULT_RATE_DT);
        assert_eq!(
            cfg.sampling(Method::FullTimeDependent).unwrap().dt,
            DEFAULT_MASTER_DT
        );
    }

    #[test]
    fn parameters_apply_in_fixed_order() {
        let text = "delta2 = 1.1\nomega = 0.08\ngamma_over_kappa = 2\npreset = fig2\ncooperativity = 40 # low\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert!((cfg.params.cooperativity() - 40.0).abs() < 1e-12);
        assert!((cfg.params.gamma_over_kappa() - 2.0).abs() < 1e-12);
        assert_eq!(cfg.params.omegas[0], 0.08);
        assert!((cfg.params.omegas[3] - 0.096).abs() < 1e-15);
        assert_eq!(cfg.params.deltas[1], 1.1);
    }

    #[test]
    fn run_keys() {
        let cfg = RunConfig::parse(
            "method = both\nt_end = 100\ndt=0.5\nsamples = 4\ninitial = haar:7\noutput = a.csv",
        )
        .unwrap();
        assert_eq!(cfg.method, MethodChoice::Both);
        assert_eq!(cfg.sampling(Method::FullTimeDependent).unwrap().dt, 0.5);
        assert_eq!(cfg.initial, InitialState::Haar { seed: 7 });
        assert_eq!(cfg.output.as_deref(), Some(Path::new("a.csv")));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line_of = |text: &str| match RunConfig::parse(text) {
            Err(Error::Config { line, .. }) => line,
            other => panic!("expected config error, got {other:?}"),
        };
        assert_eq!(line_of("\nfoo = 1"), 2);
        assert_eq!(line_of("t_end = 1\nt_end = 2"), 2);
        assert_eq!(line_of("preset = nowhere"), 1);
        assert_eq!(line_of("a\n"), 1);
        assert_eq!(line_of("\n\nomega = x"), 3);
        assert_eq!(line_of("method = bogus"), 1);
        assert_eq!(line_of("cooperativity = -3"), 1);
    }

    #[test]
    fn nonpositive_time_is_rejected() {
        assert!(RunConfig::parse("t_end = 0").is_err());
        assert!(RunConfig::parse("dt = -1").is_err());
        assert!(RunConfig::parse("samples = 0").is_err());
    }
}
