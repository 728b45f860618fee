// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use super::config::{MethodChoice, RunConfig};
use crate::dynamics::{simulate, Method, Simulation};
use crate::model::{check_weak_field, WeakFieldReport};
use crate::{Error, Result};

/// One written trajectory.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub method: Method,
    pub output: PathBuf,
    pub final_fidelity: f64,
    pub final_purity: f64,
    pub simulation: Simulation,
}

impl RunSummary {
    /// The line printed on standard output after a run.
    pub fn line(&self) -> String {
        format!(
            "method={} final_fidelity={:.6} final_purity={:.6} output={}",
            self.method,
            self.final_fidelity,
            self.final_purity,
            self.output.display()
        )
    }
}

#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub weak_field: WeakFieldReport,
    pub runs: Vec<RunSummary>,
}

impl SimulateReport {
    /// Human-readable weak-field warnings, empty when every pair passes.
    pub fn warnings(&self) -> Vec<String> {
        weak_field_warnings(&self.weak_field)
    }
}

/// One line per flagged drive pair.
pub fn weak_field_warnings(report: &WeakFieldReport) -> Vec<String> {
    report
        .flagged()
        .map(|p| {
            format!(
                "weak-field check: drives {} and {} have ratio {:.3} (Raman coupling {:.3e} vs detuning gap {:.3e})",
                p.k, p.l, p.ratio, p.lhs, p.rhs
            )
        })
        .collect()
}

/// Output files for a method choice: the path itself for one method, or
/// `<stem>_<method>.<ext>` per method for `both`.
pub fn output_paths(choice: MethodChoice, output: &Path) -> Vec<(Method, PathBuf)> {
    match choice {
        MethodChoice::Single(m) => vec![(m, output.to_path_buf())],
        MethodChoice::Both => choice
            .methods()
            .into_iter()
            .map(|m| (m, with_suffix(output, m.name())))
            .collect(),
    }
}

/// `dir/name.ext` becomes `dir/name_<suffix>.ext`.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    path.with_file_name(name)
}

/// Runs every method the config asks for and writes one CSV per method.
///
/// Weak-field violations are reported in the result; with `strict` they
/// abort before any integration.
pub fn run_simulate(config: &RunConfig, strict: bool) -> Result<SimulateReport> {
    config.validate()?;
    let output = config
        .output
        .as_deref()
        .ok_or_else(|| Error::invalid("no output path given"))?;
    let weak_field = check_weak_field(&config.params)?;
    if strict && !weak_field.passes() {
        return Err(Error::WeakField(
            weak_field_warnings(&weak_field).join("; "),
        ));
    }
    let mut runs = Vec::new();
    for (method, path) in output_paths(config.method, output) {
        let sampling = config.sampling(method)?;
        let simulation = simulate(method, &config.params, config.initial, &sampling)?;
        simulation.trajectory.write_csv(&path)?;
        let traj = &simulation.trajectory;
        runs.push(RunSummary {
            method,
            output: path,
            final_fidelity: traj.final_fidelity().unwrap_or(f64::NAN),
            final_purity: traj.final_purity().unwrap_or(f64::NAN),
            simulation,
        });
    }
    Ok(SimulateReport { weak_field, runs })
}
