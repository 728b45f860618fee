// SPDX-License-Identifier: Apache-2.0

//! What the command-line tool drives: configured runs written as CSV, and
//! steady-state sweeps feeding the `1 − F = a/C` fit.

mod config;
mod fit;
mod simulate;
mod sweep;

pub use config::{MethodChoice, RunConfig, CONFIG_KEYS, DEFAULT_SAMPLES, DEFAULT_T_END};
pub use fit::{fit_points, fit_scaling, FitResult, MIN_FIT_POINTS};
pub use simulate::{
    output_paths, run_simulate, weak_field_warnings, with_suffix, RunSummary, SimulateReport,
};
pub use sweep::{
    run_sweep, workers_from_env, SweepAxis, SweepResult, SweepRow, SweepSpec, SWEEP_HEADER,
    WORKERS_ENV,
};
