//! Experiment harness: configuration files, CSV/JSON reports, the
//! characteristic-function diagnostic, the built-in selftest, and the CLI.

pub mod cli;
pub mod config;
pub mod fourier;
pub mod report;
pub mod selftest;

pub use cli::run_cli;
pub use config::{load_model, model_from_str};
pub use fourier::{cf_decay_diagnostic, f_delta, CfDiagnostic, CfRow};
pub use report::{config_digest, fmt_real, Cell, ExperimentReport};
pub use selftest::run_selftest;
