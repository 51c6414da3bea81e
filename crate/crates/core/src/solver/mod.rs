//! LP and MIP solving.
//!
//! [`solve_lp`] is a self-contained bounded-variable primal simplex
//! (dense tableau, two-phase, deterministic pivoting), sized for
//! desk-scale studies up to a one-week hourly horizon. [`solve_mip`] is
//! best-first branch-and-bound over binary variables on top of it.
//! Anything bigger goes through [`export_mps`] and the external-solver
//! hook in [`external`].

mod bnb;
pub mod external;
mod mps;
mod simplex;
#[cfg(test)]
mod tests;

pub use bnb::solve_mip;
pub use mps::{export_mps, parse_mps};
pub use simplex::solve_with_bound_overrides;

use crate::formulation::LinearProgram;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("{0}")]
    BadInput(String),
    #[error("LP too large for the dense in-repo simplex ({rows} rows x {cols} cols); export MPS and use an external solver")]
    TooLarge { rows: usize, cols: usize },
    #[error("mps: {0}")]
    Mps(String),
    #[error("external solver: {0}")]
    External(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

/// Outcome of a solve. `primal_values` is present iff the status is
/// `Optimal`, except that branch-and-bound hitting its node limit
/// reports the incumbent (status `IterationLimit`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// `NaN` unless optimal (or an incumbent exists).
    pub objective_value: f64,
    pub primal_values: Option<Vec<f64>>,
    pub iterations: usize,
    pub wall_time: std::time::Duration,
    /// Largest constraint/bound violation of the reported point.
    pub max_residual: f64,
    /// Branch-and-bound nodes processed (0 for plain LP solves).
    pub nodes: usize,
    /// Incumbent objective after each improvement (MIP only).
    pub incumbent_history: Vec<f64>,
}

impl SolveResult {
    pub(crate) fn without_point(status: SolveStatus, iterations: usize) -> Self {
        SolveResult {
            status,
            objective_value: f64::NAN,
            primal_values: None,
            iterations,
            wall_time: std::time::Duration::ZERO,
            max_residual: f64::NAN,
            nodes: 0,
            incumbent_history: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub max_iterations: usize,
    pub bnb_gap_tol: f64,
    pub bnb_node_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feasibility_tol: 1e-7,
            optimality_tol: 1e-7,
            max_iterations: 500_000,
            bnb_gap_tol: 1e-6,
            bnb_node_limit: 100_000,
        }
    }
}

impl SolverConfig {
    fn check(&self) -> Result<(), SolverError> {
        if !(self.feasibility_tol > 0.0 && self.optimality_tol > 0.0 && self.bnb_gap_tol > 0.0) {
            return Err(SolverError::BadInput("solver tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Solve the LP relaxation (integrality flags ignored) with the in-repo
/// simplex.
pub fn solve_lp(lp: &LinearProgram, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    cfg.check()?;
    simplex::solve_with_bound_overrides(lp, cfg, None)
}
