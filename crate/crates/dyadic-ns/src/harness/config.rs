//! Harness configuration: defaults, `key = value` config files, and the
//! worker-count environment knob.

use crate::error::{Error, Result};
use crate::grid::{make_grid, Grid};
use crate::harness::report::ConfigEcho;
use crate::solver::SolverConfig;
use crate::timegrid::TimeGrid;
use std::path::Path;

/// Shared experiment configuration. Flags override config-file values,
/// which override these defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub dim: usize,
    pub grid: usize,
    pub seed: u64,
    pub r: f64,
    pub sigma: f64,
    pub horizon: f64,
    pub steps: usize,
    pub tol: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            dim: 2,
            grid: 64,
            seed: 0,
            r: 0.6,
            sigma: 0.8,
            horizon: 0.5,
            steps: 64,
            tol: 1e-9,
        }
    }
}

impl HarnessConfig {
    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            dim: self.dim,
            grid: self.grid,
            seed: self.seed,
            r: self.r,
            sigma: self.sigma,
            horizon: self.horizon,
            steps: self.steps,
            tol: self.tol,
        }
    }

    pub fn make_grid(&self) -> Result<Grid> {
        make_grid(self.dim, self.grid)
    }

    pub fn make_timegrid(&self) -> Result<TimeGrid> {
        TimeGrid::graded(self.horizon, self.steps)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        SolverConfig::new(
            self.make_grid()?,
            self.make_timegrid()?,
            self.r,
            self.sigma,
            self.tol,
            200,
        )
    }

    /// Apply one `key = value` pair (config-file line or flag name).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("invalid {what} value `{value}`"));
        match key {
            "dim" => self.dim = value.parse().map_err(|_| bad("dim"))?,
            "grid" => self.grid = value.parse().map_err(|_| bad("grid"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "r" => self.r = value.parse().map_err(|_| bad("r"))?,
            "sigma" => self.sigma = value.parse().map_err(|_| bad("sigma"))?,
            "T" | "horizon" => self.horizon = value.parse().map_err(|_| bad("T"))?,
            "steps" => self.steps = value.parse().map_err(|_| bad("steps"))?,
            "tol" => self.tol = value.parse().map_err(|_| bad("tol"))?,
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Load `key = value` lines; `#` starts a comment, blank lines ignored.
    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}

/// Build the global rayon pool honoring `DYADIC_NS_THREADS`. Call once at
/// process start; later calls are no-ops.
pub fn init_thread_pool() {
    static ONCE: std::sync::OnceLock<()> = std::sync::OnceLock::new();
    ONCE.get_or_init(|| {
        if let Ok(value) = std::env::var("DYADIC_NS_THREADS") {
            if let Ok(count) = value.parse::<usize>() {
                if count >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(count)
                        .build_global();
                }
            }
        }
    });
}
