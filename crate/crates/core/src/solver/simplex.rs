//! Bounded-variable primal simplex on a dense column-major tableau.
//!
//! Every row gets a logical column (slack for inequalities, fixed-at-zero
//! for equalities), so the logical columns form the starting basis and
//! double as phase-1 artificials. Phase 1 minimises the sum of bound
//! violations of the basic variables; phase 2 prices the maintained
//! reduced-cost row. Pivoting is deterministic: largest violation with
//! lowest-index ties, a Harris-style tie window on the ratio test that
//! prefers large pivot elements, and a Bland fallback after a long
//! degenerate streak.

use super::{SolveResult, SolveStatus, SolverConfig, SolverError};
use crate::formulation::{LinearProgram, Sense};
use std::time::Instant;

/// Hard cap on tableau memory (entries), ~2 GB of f64.
const MAX_TABLEAU_ENTRIES: usize = 250_000_000;
/// |pivot| below this never enters the basis.
const PIV_TOL: f64 = 1e-9;
/// Ratio-test tie window.
const TIE_TOL: f64 = 1e-9;
/// Degenerate steps before switching to Bland's rule.
const BLAND_TRIGGER: usize = 2000;

#[derive(Clone, Copy, PartialEq)]
enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

struct Tableau {
    m: usize,
    n_struct: usize,
    /// total columns = structural + logical
    n: usize,
    /// column-major, `n * m`
    cols: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    /// maintained reduced costs of the true objective
    dj: Vec<f64>,
    /// current value of every column's variable
    x: Vec<f64>,
    /// row -> basic column
    basis: Vec<usize>,
    /// column -> row (usize::MAX when nonbasic)
    in_row: Vec<usize>,
    /// nonbasic columns parked at their upper bound
    at_upper: Vec<bool>,
    /// fixed columns that left the basis; never priced again
    dead: Vec<bool>,
    iterations: usize,
    degenerate_streak: usize,
    scratch: Vec<f64>,
}

enum Ratio {
    Flip(f64),
    Pivot { theta: f64, row: usize, to_upper: bool },
    Unblocked,
}

impl Tableau {
    fn col(&self, j: usize) -> &[f64] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    fn build(lp: &LinearProgram, overrides: Option<&[(usize, f64, f64)]>) -> Result<Self, SolverError> {
        let m = lp.num_constraints();
        let n_struct = lp.num_vars();
        let n = n_struct + m;
        if n.saturating_mul(m) > MAX_TABLEAU_ENTRIES {
            return Err(SolverError::TooLarge { rows: m, cols: n_struct });
        }

        let mut lower: Vec<f64> = lp.variables.iter().map(|v| v.lower).collect();
        let mut upper: Vec<f64> = lp.variables.iter().map(|v| v.upper).collect();
        if let Some(ov) = overrides {
            for &(j, lo, up) in ov {
                if j >= n_struct {
                    return Err(SolverError::BadInput(format!("bound override on unknown variable {j}")));
                }
                lower[j] = lo;
                upper[j] = up;
            }
        }
        for j in 0..n_struct {
            if lower[j] > upper[j] {
                // trivially infeasible box; signalled through a flag row
                return Err(SolverError::BadInput(format!(
                    "variable `{}` has lower > upper",
                    lp.variables[j].name
                )));
            }
        }
        for c in &lp.constraints {
            let (lo, up) = match c.sense {
                Sense::Le => (0.0, f64::INFINITY),
                Sense::Ge => (f64::NEG_INFINITY, 0.0),
                Sense::Eq => (0.0, 0.0),
            };
            lower.push(lo);
            upper.push(up);
        }

        let mut cols = vec![0.0; n * m];
        for (i, c) in lp.constraints.iter().enumerate() {
            for &(j, a) in &c.terms {
                cols[j * m + i] = a;
            }
            cols[(n_struct + i) * m + i] = 1.0;
        }

        // nonbasic structurals park at their finite bound nearest zero
        let mut x = vec![0.0; n];
        let mut at_upper = vec![false; n];
        for j in 0..n_struct {
            if lower[j].is_finite() {
                x[j] = lower[j];
            } else if upper[j].is_finite() {
                x[j] = upper[j];
                at_upper[j] = true;
            } else {
                x[j] = 0.0;
            }
        }
        // logical basis start: x_B = rhs - A x_N
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut v = c.rhs;
            for &(j, a) in &c.terms {
                v -= a * x[j];
            }
            x[n_struct + i] = v;
        }

        let basis: Vec<usize> = (n_struct..n).collect();
        let mut in_row = vec![usize::MAX; n];
        for (i, &b) in basis.iter().enumerate() {
            in_row[b] = i;
        }

        let mut dj = vec![0.0; n];
        for &(j, c) in &lp.objective {
            dj[j] += c;
        }

        Ok(Tableau {
            m,
            n_struct,
            n,
            cols,
            lower,
            upper,
            dj,
            x,
            basis,
            in_row,
            at_upper,
            dead: vec![false; n],
            iterations: 0,
            degenerate_streak: 0,
            scratch: vec![0.0; m],
        })
    }

    /// Sum of bound violations over basic variables, and the signed
    /// violation pattern used for phase-1 pricing: the gradient of total
    /// infeasibility w.r.t. a rising entering column j is
    /// Σ_below col_j[r] − Σ_above col_j[r].
    fn infeasibility(&self, tol: f64, pattern: &mut Vec<(usize, f64)>) -> f64 {
        pattern.clear();
        let mut total = 0.0;
        for (r, &b) in self.basis.iter().enumerate() {
            let v = self.x[b];
            if v < self.lower[b] - tol {
                total += self.lower[b] - v;
                pattern.push((r, 1.0));
            } else if v > self.upper[b] + tol {
                total += v - self.upper[b];
                pattern.push((r, -1.0));
            }
        }
        total
    }

    /// Pick the entering column from objective gradients `grad(j)`.
    /// Dantzig rule (largest optimality violation, lowest index on ties)
    /// or Bland's rule (first eligible) when a degenerate streak demands
    /// it.
    fn pick_entering(&self, bland: bool, grad: impl Fn(usize) -> f64, tol: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.n {
            if self.in_row[j] != usize::MAX || self.dead[j] || self.lower[j] == self.upper[j] {
                continue;
            }
            let d = grad(j);
            let (score, dir) = if self.lower[j].is_infinite() && self.upper[j].is_infinite() {
                (d.abs(), if d > 0.0 { -1.0 } else { 1.0 })
            } else if self.at_upper[j] {
                (d, -1.0)
            } else {
                (-d, 1.0)
            };
            if score <= tol {
                continue;
            }
            if bland {
                return Some((j, dir));
            }
            if best.map_or(true, |(_, bs, _)| score > bs) {
                best = Some((j, score, dir));
            }
        }
        best.map(|(j, _, dir)| (j, dir))
    }

    /// Bounded ratio test. `dir` is +1 (entering rises) or −1.
    /// In phase 1, infeasible basics block when they reach the violated
    /// bound; feasible basics block at the bound they approach.
    fn ratio_test(&self, q: usize, dir: f64, phase1: bool, bland: bool, feas_tol: f64) -> Ratio {
        let col = self.col(q);
        let own_range = self.upper[q] - self.lower[q];
        let mut theta_min = f64::INFINITY;
        let mut candidates: Vec<(usize, f64, f64)> = Vec::new(); // (row, theta, |pivot|)

        for r in 0..self.m {
            let a = col[r];
            if a.abs() <= PIV_TOL {
                continue;
            }
            let rate = -dir * a; // change of basic r per unit theta
            let b = self.basis[r];
            let v = self.x[b];
            let (lo, up) = (self.lower[b], self.upper[b]);
            let theta = if phase1 && v < lo - feas_tol {
                if rate > 0.0 {
                    (lo - v) / rate
                } else {
                    continue;
                }
            } else if phase1 && v > up + feas_tol {
                if rate < 0.0 {
                    (v - up) / -rate
                } else {
                    continue;
                }
            } else if rate < 0.0 {
                if lo.is_finite() {
                    (v - lo) / -rate
                } else {
                    continue;
                }
            } else if up.is_finite() {
                (up - v) / rate
            } else {
                continue;
            };
            let theta = theta.max(0.0);
            if theta < theta_min {
                theta_min = theta;
            }
            candidates.push((r, theta, a.abs()));
        }

        if candidates.is_empty() {
            return if own_range.is_finite() { Ratio::Flip(own_range) } else { Ratio::Unblocked };
        }
        if own_range.is_finite() && own_range <= theta_min {
            return Ratio::Flip(own_range);
        }

        let window = theta_min + TIE_TOL * (1.0 + theta_min);
        let mut pick: Option<(usize, f64, f64)> = None;
        for &(r, theta, piv) in &candidates {
            if theta > window {
                continue;
            }
            let better = match pick {
                None => true,
                Some((pr, _, ppiv)) => {
                    if bland {
                        self.basis[r] < self.basis[pr]
                    } else {
                        piv > ppiv + f64::EPSILON * ppiv || (piv == ppiv && r < pr)
                    }
                }
            };
            if better {
                pick = Some((r, theta, piv));
            }
        }
        let (row, theta, _) = pick.expect("nonempty candidate set");
        let b = self.basis[row];
        let rate = -dir * col[row];
        // which bound the leaving variable lands on
        let to_upper = if phase1 && self.x[b] > self.upper[b] + feas_tol {
            true
        } else if phase1 && self.x[b] < self.lower[b] - feas_tol {
            false
        } else {
            rate > 0.0
        };
        Ratio::Pivot { theta: theta.max(0.0), row, to_upper }
    }

    fn apply_flip(&mut self, q: usize, dir: f64, range: f64) {
        let delta = dir * range;
        let col_ptr = q * self.m;
        for r in 0..self.m {
            let a = self.cols[col_ptr + r];
            if a != 0.0 {
                let b = self.basis[r];
                self.x[b] -= delta * a;
            }
        }
        self.x[q] += delta;
        self.at_upper[q] = !self.at_upper[q];
        self.iterations += 1;
        if range > 1e-12 {
            self.degenerate_streak = 0;
        }
    }

    fn apply_pivot(&mut self, q: usize, dir: f64, theta: f64, row: usize, to_upper: bool) {
        let m = self.m;
        // snapshot the entering column before it is rewritten
        self.scratch.copy_from_slice(&self.cols[q * m..(q + 1) * m]);
        let piv = self.scratch[row];
        debug_assert!(piv.abs() > 0.0);

        let delta = dir * theta;
        for r in 0..m {
            let a = self.scratch[r];
            if a != 0.0 {
                let b = self.basis[r];
                self.x[b] -= delta * a;
            }
        }
        let entering_value = self.x[q] + delta;

        let leaving = self.basis[row];
        self.x[leaving] = if to_upper { self.upper[leaving] } else { self.lower[leaving] };
        self.at_upper[leaving] = to_upper;
        self.in_row[leaving] = usize::MAX;
        if self.lower[leaving] == self.upper[leaving] {
            self.dead[leaving] = true;
        }
        self.basis[row] = q;
        self.in_row[q] = row;
        self.x[q] = entering_value;

        // eliminate: column q becomes e_row, reduced costs follow
        let dq = self.dj[q];
        for j in 0..self.n {
            if j == q || self.dead[j] {
                continue;
            }
            let base = j * m;
            let f = self.cols[base + row];
            if f == 0.0 {
                continue;
            }
            let ratio = f / piv;
            let col_j = &mut self.cols[base..base + m];
            for (i, &s) in self.scratch.iter().enumerate() {
                if s != 0.0 {
                    col_j[i] -= ratio * s;
                }
            }
            col_j[row] = ratio;
            self.dj[j] -= dq * ratio;
        }
        let base = q * m;
        for v in &mut self.cols[base..base + m] {
            *v = 0.0;
        }
        self.cols[base + row] = 1.0;
        self.dj[q] = 0.0;

        self.iterations += 1;
        if theta <= 1e-12 {
            self.degenerate_streak += 1;
        } else {
            self.degenerate_streak = 0;
        }
    }

    fn phase1(&mut self, cfg: &SolverConfig) -> Outcome {
        let tol = cfg.feasibility_tol;
        let mut pattern = Vec::new();
        loop {
            if self.iterations >= cfg.max_iterations {
                return Outcome::IterationLimit;
            }
            let infeas = self.infeasibility(tol, &mut pattern);
            if infeas <= tol {
                return Outcome::Optimal;
            }
            let bland = self.degenerate_streak > BLAND_TRIGGER;
            // phase-1 price: d_j = Σ σ_r · col_j[r] over violated rows
            let cols = &self.cols;
            let m = self.m;
            let entry = self.pick_entering(
                bland,
                |j| {
                    let base = j * m;
                    let mut d = 0.0;
                    for &(r, sigma) in &pattern {
                        d += sigma * cols[base + r];
                    }
                    d
                },
                1e-9,
            );
            let Some((q, dir)) = entry else {
                return Outcome::Infeasible;
            };
            match self.ratio_test(q, dir, true, bland, tol) {
                Ratio::Flip(range) => self.apply_flip(q, dir, range),
                Ratio::Pivot { theta, row, to_upper } => self.apply_pivot(q, dir, theta, row, to_upper),
                Ratio::Unblocked => {
                    // a strictly improving unbounded ray in phase 1 cannot
                    // exist; treat as numerical failure -> infeasible
                    return Outcome::Infeasible;
                }
            }
        }
    }

    fn phase2(&mut self, cfg: &SolverConfig, cmax: f64) -> Outcome {
        let d_tol = cfg.optimality_tol * cmax.max(1.0);
        loop {
            if self.iterations >= cfg.max_iterations {
                return Outcome::IterationLimit;
            }
            let bland = self.degenerate_streak > BLAND_TRIGGER;
            let dj = &self.dj;
            let entry = self.pick_entering(bland, |j| dj[j], d_tol);
            let Some((q, dir)) = entry else {
                return Outcome::Optimal;
            };
            match self.ratio_test(q, dir, false, bland, cfg.feasibility_tol) {
                Ratio::Flip(range) => self.apply_flip(q, dir, range),
                Ratio::Pivot { theta, row, to_upper } => self.apply_pivot(q, dir, theta, row, to_upper),
                Ratio::Unblocked => return Outcome::Unbounded,
            }
        }
    }
}

/// Solve `lp` with optional per-variable bound overrides (used by
/// branch-and-bound to fix binaries without cloning the LP).
pub fn solve_with_bound_overrides(
    lp: &LinearProgram,
    cfg: &SolverConfig,
    overrides: Option<&[(usize, f64, f64)]>,
) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    let mut t = match Tableau::build(lp, overrides) {
        Ok(t) => t,
        Err(SolverError::BadInput(_)) if overrides.is_some() => {
            // branch fixings can cross; that subproblem is just empty
            let mut r = SolveResult::without_point(SolveStatus::Infeasible, 0);
            r.wall_time = start.elapsed();
            return Ok(r);
        }
        Err(e) => return Err(e),
    };

    let cmax = lp.objective.iter().map(|&(_, c)| c.abs()).fold(0.0, f64::max);
    let outcome = match t.phase1(cfg) {
        Outcome::Optimal => t.phase2(cfg, cmax),
        other => other,
    };

    let status = match outcome {
        Outcome::Optimal => SolveStatus::Optimal,
        Outcome::Infeasible => SolveStatus::Infeasible,
        Outcome::Unbounded => SolveStatus::Unbounded,
        Outcome::IterationLimit => SolveStatus::IterationLimit,
    };
    if status != SolveStatus::Optimal {
        let mut r = SolveResult::without_point(status, t.iterations);
        r.wall_time = start.elapsed();
        return Ok(r);
    }

    let mut x: Vec<f64> = t.x[..t.n_struct].to_vec();
    let mut residual = max_violation_with(lp, overrides, &x);
    if residual > 0.5 * cfg.feasibility_tol {
        if let Some(polished) = polish(lp, &t, overrides) {
            let r2 = max_violation_with(lp, overrides, &polished);
            if r2 < residual {
                x = polished;
                residual = r2;
            }
        }
    }

    let objective_value = lp.objective_value(&x);
    Ok(SolveResult {
        status,
        objective_value,
        primal_values: Some(x),
        iterations: t.iterations,
        wall_time: start.elapsed(),
        max_residual: residual,
        nodes: 0,
        incumbent_history: Vec::new(),
    })
}

fn max_violation_with(lp: &LinearProgram, overrides: Option<&[(usize, f64, f64)]>, x: &[f64]) -> f64 {
    let mut worst = lp.max_violation(x);
    if let Some(ov) = overrides {
        for &(j, lo, up) in ov {
            worst = worst.max(lo - x[j]).max(x[j] - up);
        }
    }
    worst
}

/// Recompute the basic values exactly from the original data by solving
/// `B x_B = b - N x_N` with dense LU; repairs tableau drift after long
/// pivot sequences.
fn polish(lp: &LinearProgram, t: &Tableau, _overrides: Option<&[(usize, f64, f64)]>) -> Option<Vec<f64>> {
    let m = t.m;
    if m == 0 {
        return None;
    }
    let n_struct = t.n_struct;
    // effective rhs: subtract nonbasic structural contributions
    let mut rhs: Vec<f64> = lp.constraints.iter().map(|c| c.rhs).collect();
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            if t.in_row[j] == usize::MAX {
                rhs[i] -= a * t.x[j];
            }
        }
    }
    // nonbasic logicals contribute their (bound) value on their own row
    for j in n_struct..t.n {
        if t.in_row[j] == usize::MAX && t.x[j] != 0.0 {
            rhs[j - n_struct] -= t.x[j];
        }
    }

    // original matrix by column, gathered once
    let mut by_col: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_struct];
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(j, a) in &c.terms {
            by_col[j].push((i, a));
        }
    }
    // dense basis matrix from original columns
    let mut b_mat = vec![0.0; m * m]; // row-major
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n_struct {
            for &(i, a) in &by_col[bj] {
                b_mat[i * m + r] = a;
            }
        } else {
            b_mat[(bj - n_struct) * m + r] = 1.0;
        }
    }
    let xb = lu_solve(&mut b_mat, m, &mut rhs)?;

    let mut x: Vec<f64> = t.x[..n_struct].to_vec();
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n_struct {
            x[bj] = xb[r];
        }
    }
    Some(x)
}

/// In-place partial-pivot LU solve; returns None on singularity.
fn lu_solve(a: &mut [f64], n: usize, b: &mut [f64]) -> Option<Vec<f64>> {
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = a[perm[k] * n + k].abs();
        for r in k + 1..n {
            let v = a[perm[r] * n + k].abs();
            if v > best {
                best = v;
                p = r;
            }
        }
        if best < 1e-14 {
            return None;
        }
        perm.swap(k, p);
        let pk = perm[k];
        let pivot = a[pk * n + k];
        for r in k + 1..n {
            let pr = perm[r];
            let f = a[pr * n + k] / pivot;
            if f == 0.0 {
                continue;
            }
            a[pr * n + k] = f;
            for c in k + 1..n {
                a[pr * n + c] -= f * a[pk * n + c];
            }
        }
    }
    // forward
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut v = b[perm[i]];
        for k in 0..i {
            v -= a[perm[i] * n + k] * y[k];
        }
        y[i] = v;
    }
    // back
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in i + 1..n {
            v -= a[perm[i] * n + k] * x[k];
        }
        x[i] = v / a[perm[i] * n + i];
    }
    Some(x)
}
