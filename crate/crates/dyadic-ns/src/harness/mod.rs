//! Named verification suites binding each analytical property to a
//! reproducible experiment, with JSON/CSV report emission.
//!
//! Determinism contract: identical config and seed produce byte-identical
//! reports apart from the wall-time field. Exit-code contract (CLI): 0 all
//! assertions pass, 1 an assertion failed, 2 usage or config error.

pub mod config;
pub mod report;
mod suites_fields;
mod suites_solver;

pub use config::{init_thread_pool, HarnessConfig};
pub use report::{Assertion, ConfigEcho, ReportBuilder, Status, SuiteReport};
pub use suites_solver::weighted_norm_probe;

use crate::error::{Error, Result};

/// All suite names, in the order `suite all` runs them.
pub const SUITE_NAMES: [&str; 16] = [
    "partition",
    "bony",
    "bernstein",
    "heat_char",
    "heat_smoothing",
    "oseen_map",
    "kernel_scaling",
    "singular_l",
    "picard",
    "small_time",
    "uniqueness",
    "energy",
    "blowup_synthetic",
    "bootstrap",
    "gmo",
    "sup_interp",
];

/// Run one named suite under the given configuration.
pub fn run_suite(name: &str, cfg: &HarnessConfig) -> Result<SuiteReport> {
    match name {
        "partition" => suites_fields::partition_suite(cfg),
        "bony" => suites_fields::bony_suite(cfg),
        "bernstein" => suites_fields::bernstein_suite(cfg),
        "heat_char" => suites_fields::heat_char_suite(cfg),
        "heat_smoothing" => suites_fields::heat_smoothing_suite(cfg),
        "oseen_map" => suites_fields::oseen_map_suite(cfg),
        "kernel_scaling" => suites_fields::kernel_scaling_suite(cfg),
        "singular_l" => suites_fields::singular_l_suite(cfg),
        "picard" => suites_solver::picard_suite(cfg),
        "small_time" => suites_solver::small_time_suite(cfg),
        "uniqueness" => suites_solver::uniqueness_suite(cfg),
        "energy" => suites_solver::energy_suite(cfg),
        "blowup_synthetic" => suites_solver::blowup_synthetic_suite(cfg),
        "bootstrap" => suites_solver::bootstrap_suite(cfg),
        "gmo" => suites_fields::gmo_suite(cfg),
        "sup_interp" => suites_fields::sup_interp_suite(cfg),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

/// Run every suite; `concurrent` executes independent suites on the rayon
/// pool (reports come back in registry order either way).
pub fn run_all(cfg: &HarnessConfig, concurrent: bool) -> Result<Vec<SuiteReport>> {
    if concurrent {
        use rayon::prelude::*;
        SUITE_NAMES
            .par_iter()
            .map(|name| run_suite(name, cfg))
            .collect()
    } else {
        SUITE_NAMES
            .iter()
            .map(|name| run_suite(name, cfg))
            .collect()
    }
}
