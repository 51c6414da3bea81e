//! Best-first branch-and-bound over binary variables.
//!
//! Nodes carry only their bound fixings; every node LP is re-solved from
//! scratch by the dense simplex. Deterministic: the node queue orders by
//! (bound, id), branching picks the most fractional binary with
//! lowest-index ties, and the zero-branch is explored first.

use super::simplex::solve_with_bound_overrides;
use super::{SolveResult, SolveStatus, SolverConfig, SolverError};
use crate::formulation::LinearProgram;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

const INT_TOL: f64 = 1e-6;

struct Node {
    bound: f64,
    id: u64,
    fixings: Vec<(usize, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.id == other.id
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; invert for lowest-bound-first,
        // then lowest id
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Solve a mixed-binary program. Integrality flags must sit on variables
/// bounded within [0, 1].
pub fn solve_mip(lp: &LinearProgram, cfg: &SolverConfig) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let binaries: Vec<usize> = lp
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_integer)
        .map(|(j, _)| j)
        .collect();
    for &j in &binaries {
        let v = &lp.variables[j];
        if v.lower < -INT_TOL || v.upper > 1.0 + INT_TOL {
            return Err(SolverError::BadInput(format!(
                "integer variable `{}` must be bounded within [0, 1]",
                v.name
            )));
        }
    }

    let mut iterations = 0usize;
    let mut nodes_done = 0usize;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut history = Vec::new();
    let mut next_id = 0u64;
    let mut queue: BinaryHeap<Node> = BinaryHeap::new();
    queue.push(Node {
        bound: f64::NEG_INFINITY,
        id: next_id,
        fixings: Vec::new(),
    });
    next_id += 1;

    let mut exhausted = true;
    while let Some(node) = queue.pop() {
        if nodes_done >= cfg.bnb_node_limit || iterations >= cfg.max_iterations {
            exhausted = false;
            break;
        }
        // prune against the incumbent before paying for the solve
        if let Some((inc, _)) = &incumbent {
            if node.bound >= inc - gap_slack(cfg, *inc) {
                continue;
            }
        }

        let relax = solve_with_bound_overrides(lp, cfg, Some(&node.fixings))?;
        iterations += relax.iterations;
        nodes_done += 1;
        match relax.status {
            SolveStatus::Infeasible => continue,
            SolveStatus::Unbounded => {
                // an unbounded relaxation at the root means the MIP has
                // no finite optimum either (binaries cannot bound it)
                let mut r = SolveResult::without_point(SolveStatus::Unbounded, iterations);
                r.wall_time = start.elapsed();
                r.nodes = nodes_done;
                return Ok(r);
            }
            SolveStatus::IterationLimit => {
                exhausted = false;
                break;
            }
            SolveStatus::Optimal => {}
        }
        let x = relax.primal_values.expect("optimal relaxation has a point");
        let obj = relax.objective_value;
        if let Some((inc, _)) = &incumbent {
            if obj >= inc - gap_slack(cfg, *inc) {
                continue;
            }
        }

        // most fractional binary, lowest index on ties
        let mut branch: Option<(usize, f64)> = None;
        for &j in &binaries {
            let frac = (x[j] - x[j].round()).abs();
            if frac > INT_TOL && branch.map_or(true, |(_, bf)| frac > bf) {
                branch = Some((j, frac));
            }
        }
        match branch {
            None => {
                // integral point: snap and accept
                let mut xi = x;
                for &j in &binaries {
                    xi[j] = xi[j].round();
                }
                let obj = lp.objective_value(&xi);
                if incumbent.as_ref().map_or(true, |(inc, _)| obj < *inc) {
                    history.push(obj);
                    incumbent = Some((obj, xi));
                }
            }
            Some((j, _)) => {
                for val in [0.0, 1.0] {
                    let mut fixings = node.fixings.clone();
                    fixings.push((j, val, val));
                    queue.push(Node {
                        bound: obj,
                        id: next_id,
                        fixings,
                    });
                    next_id += 1;
                }
            }
        }
    }

    let wall_time = start.elapsed();
    let result = match incumbent {
        Some((obj, x)) => {
            let status = if exhausted { SolveStatus::Optimal } else { SolveStatus::IterationLimit };
            let max_residual = lp.max_violation(&x);
            SolveResult {
                status,
                objective_value: obj,
                primal_values: Some(x),
                iterations,
                wall_time,
                max_residual,
                nodes: nodes_done,
                incumbent_history: history,
            }
        }
        None => {
            let status = if exhausted { SolveStatus::Infeasible } else { SolveStatus::IterationLimit };
            let mut r = SolveResult::without_point(status, iterations);
            r.wall_time = wall_time;
            r.nodes = nodes_done;
            r
        }
    };
    Ok(result)
}

fn gap_slack(cfg: &SolverConfig, incumbent: f64) -> f64 {
    cfg.bnb_gap_tol * incumbent.abs().max(1.0)
}
