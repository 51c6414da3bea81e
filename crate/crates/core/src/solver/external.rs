//! External-solver hook for horizons the dense simplex cannot reach.
//!
//! The command comes from the `SALTPLAN_LP_SOLVER` environment variable:
//! a single string, split on whitespace, with `{mps}` and `{sol}`
//! placeholders for the problem and solution file paths. Protocol:
//!
//! * exit 0 — solved; `{sol}` holds `var_name value` lines (absent
//!   variables are zero; lines starting with `#` or `=` are ignored)
//! * exit 2 — infeasible, exit 3 — unbounded
//! * anything else — solver failure
//!
//! `tools/external_highs.py` in this repository implements the protocol
//! on top of scipy's HiGHS interface.

use super::{export_mps, SolveResult, SolveStatus, SolverError};
use crate::formulation::LinearProgram;
use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

/// Environment variable holding the external-solver command template.
pub const SOLVER_ENV_VAR: &str = "SALTPLAN_LP_SOLVER";

#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub command: String,
}

impl ExternalSolver {
    /// The configured external solver, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var(SOLVER_ENV_VAR).ok().filter(|s| !s.trim().is_empty()).map(|command| ExternalSolver { command })
    }

    /// Write `lp` as MPS into `work_dir`, run the command, and parse the
    /// solution file back.
    pub fn solve(&self, lp: &LinearProgram, work_dir: &Path) -> Result<SolveResult, SolverError> {
        let start = Instant::now();
        std::fs::create_dir_all(work_dir)?;
        let mps_path = work_dir.join("problem.mps");
        let sol_path = work_dir.join("problem.sol");
        std::fs::write(&mps_path, export_mps(lp)?)?;
        let _ = std::fs::remove_file(&sol_path);

        let parts: Vec<String> = self
            .command
            .split_whitespace()
            .map(|tok| {
                tok.replace("{mps}", &mps_path.display().to_string())
                    .replace("{sol}", &sol_path.display().to_string())
            })
            .collect();
        if parts.is_empty() {
            return Err(SolverError::External("empty solver command".into()));
        }
        let status = std::process::Command::new(&parts[0])
            .args(&parts[1..])
            .status()
            .map_err(|e| SolverError::External(format!("failed to launch `{}`: {e}", parts[0])))?;

        match status.code() {
            Some(0) => {}
            Some(2) => {
                let mut r = SolveResult::without_point(SolveStatus::Infeasible, 0);
                r.wall_time = start.elapsed();
                return Ok(r);
            }
            Some(3) => {
                let mut r = SolveResult::without_point(SolveStatus::Unbounded, 0);
                r.wall_time = start.elapsed();
                return Ok(r);
            }
            code => {
                return Err(SolverError::External(format!(
                    "`{}` exited with {:?}",
                    self.command, code
                )))
            }
        }

        let text = std::fs::read_to_string(&sol_path)
            .map_err(|e| SolverError::External(format!("no solution file `{}`: {e}", sol_path.display())))?;
        let values = parse_solution_file(&text)?;
        let mut x = vec![0.0; lp.num_vars()];
        let index: HashMap<&str, usize> = lp
            .variables
            .iter()
            .enumerate()
            .map(|(j, v)| (v.name.as_str(), j))
            .collect();
        let mut matched = 0usize;
        for (name, value) in &values {
            if let Some(&j) = index.get(name.as_str()) {
                x[j] = *value;
                matched += 1;
            }
        }
        if matched == 0 && !values.is_empty() {
            return Err(SolverError::External("solution file shares no variable names with the LP".into()));
        }

        Ok(SolveResult {
            status: SolveStatus::Optimal,
            objective_value: lp.objective_value(&x),
            max_residual: lp.max_violation(&x),
            primal_values: Some(x),
            iterations: 0,
            wall_time: start.elapsed(),
            nodes: 0,
            incumbent_history: Vec::new(),
        })
    }
}

/// Parse `var_name value` lines.
pub fn parse_solution_file(text: &str) -> Result<Vec<(String, f64)>, SolverError> {
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('=') {
            continue;
        }
        let mut it = line.split_whitespace();
        let name = it.next().unwrap();
        let value = it
            .next()
            .ok_or_else(|| SolverError::External(format!("solution line {}: missing value", line_no + 1)))?;
        let value: f64 = value
            .parse()
            .map_err(|_| SolverError::External(format!("solution line {}: bad value `{value}`", line_no + 1)))?;
        out.push((name.to_string(), value));
    }
    Ok(out)
}
