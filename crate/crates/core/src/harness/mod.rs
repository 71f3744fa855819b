//! Run orchestration: configuration, error norms, convergence studies and
//! the CSV/JSON files consumed by the plotting scripts.

pub mod analysis_io;
mod config;
pub mod norms;
pub mod output;
mod runner;

pub use config::{parse_config, RunConfig, Scheme};
pub use norms::{l1_error_1d, l1_error_2d, observed_orders, L1Errors, VarSet};
pub use runner::{convergence_study, run, ConvergenceReport, ConvergenceRow};
