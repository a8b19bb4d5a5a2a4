use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_P_MAX: u32 = 200;
pub const DEFAULT_MAX_ITER: usize = 1000;
pub const DEFAULT_SEARCH_DEPTH: usize = 8;
pub const DEFAULT_ZERO_EPS: f64 = 1e-6;
pub const DEFAULT_CYCLE_WINDOW: usize = 64;

/// Tolerances and limits shared by the filter, the orbit search and the scanner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// Absolute tolerance for identity/parabolic detection and character matching.
    pub tol: f64,
    /// Largest elliptic order recognized.
    pub p_max: u32,
    /// Letters applied per orbit before giving up.
    pub max_iter: usize,
    /// Longest word tried by the semigroup search.
    pub search_depth: usize,
    /// Magnitude below which a strictly decreasing orbit counts as converging to zero.
    pub zero_eps: f64,
    /// Prior orbit values compared against for cycle detection.
    pub cycle_window: usize,
    /// Worker threads for scans and sweeps.
    pub threads: usize,
    /// Run the orbit-certificate stage of the filter.
    pub use_dynamics: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            tol: DEFAULT_TOL,
            p_max: DEFAULT_P_MAX,
            max_iter: DEFAULT_MAX_ITER,
            search_depth: DEFAULT_SEARCH_DEPTH,
            zero_eps: DEFAULT_ZERO_EPS,
            cycle_window: DEFAULT_CYCLE_WINDOW,
            threads: default_threads(),
            use_dynamics: true,
        }
    }
}

pub fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return bad("tol must lie in (0, 1e-3]");
        }
        if self.p_max < 2 {
            return bad("p_max must be at least 2");
        }
        if self.max_iter == 0 || self.search_depth == 0 || self.cycle_window == 0 || self.threads == 0 {
            return bad("max_iter, search_depth, cycle_window and threads must be positive");
        }
        if !(self.zero_eps > 0.0 && self.zero_eps.is_finite()) {
            return bad("zero_eps must be positive");
        }
        Ok(())
    }
}
