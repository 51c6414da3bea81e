use super::*;
use crate::formulation::{LpBuilder, Sense};
use rand::Rng;

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

/// max 3x + 2y s.t. x ≤ 4, y ≤ 3, x + y ≤ 5, x,y ≥ 0, as a minimisation.
/// Vertex enumeration over the 5 basic feasible points (0,0) (4,0) (0,3)
/// (4,1) (2,3) gives objectives 0, 12, 6, 14, 12 → optimum 14 at (4,1).
fn prod_mix_lp() -> crate::formulation::LinearProgram {
    let mut b = LpBuilder::new("prodmix");
    let x = b.add_var("x", 0.0, f64::INFINITY, false).unwrap();
    let y = b.add_var("y", 0.0, f64::INFINITY, false).unwrap();
    b.add_constraint("cx", &[(x, 1.0)], Sense::Le, 4.0).unwrap();
    b.add_constraint("cy", &[(y, 1.0)], Sense::Le, 3.0).unwrap();
    b.add_constraint("cxy", &[(x, 1.0), (y, 1.0)], Sense::Le, 5.0).unwrap();
    b.add_objective_term(x, -3.0);
    b.add_objective_term(y, -2.0);
    b.finish()
}

#[test]
fn prod_mix_optimum() {
    let r = solve_lp(&prod_mix_lp(), &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective_value - (-14.0)).abs() < 1e-9);
    let x = r.primal_values.unwrap();
    assert!((x[0] - 4.0).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
    assert!(r.max_residual <= 1e-7);
}

#[test]
fn zero_objective_over_box() {
    let mut b = LpBuilder::new("box");
    b.add_var("x", -1.0, 2.0, false).unwrap();
    b.add_var("y", 0.0, 5.0, false).unwrap();
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert_eq!(r.objective_value, 0.0);
}

#[test]
fn contradictory_rows_are_infeasible() {
    let mut b = LpBuilder::new("inf");
    let x = b.add_var("x", 0.0, 10.0, false).unwrap();
    b.add_constraint("ge2", &[(x, 1.0)], Sense::Ge, 2.0).unwrap();
    b.add_constraint("le1", &[(x, 1.0)], Sense::Le, 1.0).unwrap();
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Infeasible);
    assert!(r.primal_values.is_none());
}

#[test]
fn open_ray_is_unbounded() {
    let mut b = LpBuilder::new("unb");
    let x = b.add_var("x", 0.0, f64::INFINITY, false).unwrap();
    let y = b.add_var("y", 0.0, 1.0, false).unwrap();
    b.add_constraint("tie", &[(x, 1.0), (y, -1.0)], Sense::Ge, 0.0).unwrap();
    b.add_objective_term(x, -1.0);
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Unbounded);
}

#[test]
fn equality_rows_drive_phase_one() {
    let mut b = LpBuilder::new("eq");
    let x = b.add_var("x", 0.0, 10.0, false).unwrap();
    let y = b.add_var("y", 0.0, 10.0, false).unwrap();
    b.add_constraint("sum", &[(x, 1.0), (y, 1.0)], Sense::Eq, 5.0).unwrap();
    b.add_objective_term(x, 1.0);
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    let p = r.primal_values.unwrap();
    assert!(p[0].abs() < 1e-9 && (p[1] - 5.0).abs() < 1e-9);
}

#[test]
fn free_variable_settles_on_row_bound() {
    let mut b = LpBuilder::new("free");
    let x = b.add_var("x", f64::NEG_INFINITY, f64::INFINITY, false).unwrap();
    b.add_constraint("floor", &[(x, 1.0)], Sense::Ge, -3.0).unwrap();
    b.add_objective_term(x, 1.0);
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective_value + 3.0).abs() < 1e-9);
}

#[test]
fn negative_rhs_inequalities() {
    // x ≤ -2 with x in [-5, 5]: slack starts infeasible, phase 1 repairs
    let mut b = LpBuilder::new("neg");
    let x = b.add_var("x", -5.0, 5.0, false).unwrap();
    b.add_constraint("cap", &[(x, 1.0)], Sense::Le, -2.0).unwrap();
    b.add_objective_term(x, -1.0); // maximise x
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.objective_value - 2.0).abs() < 1e-9);
    assert!((r.primal_values.unwrap()[0] + 2.0).abs() < 1e-9);
}

#[test]
fn determinism_identical_runs() {
    let lp = prod_mix_lp();
    let a = solve_lp(&lp, &cfg()).unwrap();
    let b = solve_lp(&lp, &cfg()).unwrap();
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.objective_value, b.objective_value);
    assert_eq!(a.primal_values, b.primal_values);
}

#[test]
fn iteration_limit_surfaces_in_status() {
    let lp = prod_mix_lp();
    let mut c = cfg();
    c.max_iterations = 1;
    let r = solve_lp(&lp, &c).unwrap();
    assert_eq!(r.status, SolveStatus::IterationLimit);
}

#[test]
fn objective_offset_carries_through() {
    let mut b = LpBuilder::new("off");
    let x = b.add_var("x", 0.0, 2.0, false).unwrap();
    b.add_objective_term(x, 1.0);
    b.add_objective_offset(10.0);
    let lp = b.finish();
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert!((r.objective_value - 10.0).abs() < 1e-12);
}

// ---- randomized cross-checks ---------------------------------------------

/// Independent exact oracle for small LPs over boxes: enumerate every
/// basis candidate (active-set subsets of rows and bounds), solve the
/// square system by Gaussian elimination, keep feasible points, return
/// the best objective. Exponential and only fit for n ≤ 3, m ≤ 4.
mod vertex_oracle {
    use crate::formulation::{LinearProgram, Sense};

    fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
        let n = b.len();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
            if a[p][k].abs() < 1e-11 {
                return None;
            }
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = b[i];
            for j in i + 1..n {
                v -= a[i][j] * x[j];
            }
            x[i] = v / a[i][i];
        }
        Some(x)
    }

    pub fn best_objective(lp: &LinearProgram) -> Option<f64> {
        let n = lp.num_vars();
        // candidate active equalities: every row at equality, every bound
        let mut active: Vec<(Vec<f64>, f64)> = Vec::new();
        for c in &lp.constraints {
            let mut row = vec![0.0; n];
            for &(j, a) in &c.terms {
                row[j] += a;
            }
            active.push((row, c.rhs));
        }
        for (j, v) in lp.variables.iter().enumerate() {
            for bound in [v.lower, v.upper] {
                if bound.is_finite() {
                    let mut row = vec![0.0; n];
                    row[j] = 1.0;
                    active.push((row, bound));
                }
            }
        }
        let k = active.len();
        let mut best: Option<f64> = None;
        let mut idx = vec![0usize; n];
        // iterate all n-subsets of k candidates
        fn rec(
            start: usize,
            depth: usize,
            n: usize,
            k: usize,
            idx: &mut Vec<usize>,
            active: &[(Vec<f64>, f64)],
            lp: &LinearProgram,
            best: &mut Option<f64>,
        ) {
            if depth == n {
                let a: Vec<Vec<f64>> = idx.iter().map(|&i| active[i].0.clone()).collect();
                let b: Vec<f64> = idx.iter().map(|&i| active[i].1).collect();
                if let Some(x) = gauss_solve(a, b) {
                    if lp.max_violation(&x) <= 1e-7 {
                        let obj = lp.objective_value(&x);
                        if best.map_or(true, |cur| obj < cur) {
                            *best = Some(obj);
                        }
                    }
                }
                return;
            }
            for i in start..k {
                idx[depth] = i;
                rec(i + 1, depth + 1, n, k, idx, active, lp, best);
            }
        }
        rec(0, 0, n, k, &mut idx, &active, lp, &mut best);
        best
    }
}

fn random_box_lp(rng: &mut impl rand::Rng, n: usize, m: usize) -> crate::formulation::LinearProgram {
    let mut b = LpBuilder::new("rand");
    let mut vars = Vec::new();
    for j in 0..n {
        let up: f64 = rng.random_range(1.0..6.0);
        vars.push(b.add_var(format!("x{j}"), 0.0, up, false).unwrap());
        let c: f64 = rng.random_range(-4.0..4.0);
        b.add_objective_term(vars[j], (c * 8.0).round() / 8.0);
    }
    for i in 0..m {
        let terms: Vec<(usize, f64)> = vars
            .iter()
            .map(|&v| (v, (rng.random_range(-2.0..2.0f64) * 4.0).round() / 4.0))
            .filter(|&(_, a)| a != 0.0)
            .collect();
        // rhs ≥ 0 keeps the origin feasible
        b.add_constraint(format!("r{i}"), &terms, Sense::Le, rng.random_range(0.5..4.0)).unwrap();
    }
    b.finish()
}

#[test]
fn random_small_lps_match_vertex_enumeration() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..200 {
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=4);
        let lp = random_box_lp(&mut rng, n, m);
        let r = solve_lp(&lp, &cfg()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal, "trial {trial}");
        let oracle = vertex_oracle::best_objective(&lp).expect("origin is feasible");
        assert!(
            (r.objective_value - oracle).abs() <= 1e-7 * oracle.abs().max(1.0),
            "trial {trial}: simplex {} vs oracle {oracle}",
            r.objective_value
        );
        assert!(r.max_residual <= 1e-7, "trial {trial}");
        // objective must equal the coefficient · value dot product
        let x = r.primal_values.as_ref().unwrap();
        assert!((lp.objective_value(x) - r.objective_value).abs() <= 1e-9 * r.objective_value.abs().max(1.0));
    }
}

#[test]
fn lagrangian_dual_bounds_never_exceed_optimum() {
    // weak duality: L(y) = -y·b + Σ_j min over the box of (c+Aᵀy)_j x_j
    // is a lower bound for any y ≥ 0 on `≤` rows
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.random_range(2..=5);
        let m = rng.random_range(1..=5);
        let lp = random_box_lp(&mut rng, n, m);
        let r = solve_lp(&lp, &cfg()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        let mut cost = vec![0.0; lp.num_vars()];
        for &(j, c) in &lp.objective {
            cost[j] += c;
        }
        for _ in 0..10 {
            let y: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0)).collect();
            let mut bound = 0.0;
            let mut reduced = cost.clone();
            for (i, c) in lp.constraints.iter().enumerate() {
                bound -= y[i] * c.rhs;
                for &(j, a) in &c.terms {
                    reduced[j] += y[i] * a;
                }
            }
            for (j, v) in lp.variables.iter().enumerate() {
                bound += if reduced[j] >= 0.0 { reduced[j] * v.lower } else { reduced[j] * v.upper };
            }
            assert!(
                bound <= r.objective_value + 1e-7 * r.objective_value.abs().max(1.0),
                "dual bound {bound} exceeds optimum {}",
                r.objective_value
            );
        }
    }
}

// ---- branch and bound ------------------------------------------------------

fn knapsack_lp(values: &[f64], weights: &[f64], cap: f64) -> crate::formulation::LinearProgram {
    let mut b = LpBuilder::new("knapsack");
    let vars: Vec<usize> = values
        .iter()
        .enumerate()
        .map(|(j, _)| b.add_var(format!("z{j}"), 0.0, 1.0, true).unwrap())
        .collect();
    let terms: Vec<(usize, f64)> = vars.iter().zip(weights).map(|(&v, &w)| (v, w)).collect();
    b.add_constraint("cap", &terms, Sense::Le, cap).unwrap();
    for (&v, &val) in vars.iter().zip(values) {
        b.add_objective_term(v, -val); // maximise value
    }
    b.finish()
}

#[test]
fn mip_matches_knapsack_enumeration() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for trial in 0..50 {
        let n = rng.random_range(2..=10);
        let values: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..10.0f64).round()).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(1.0..6.0f64).round()).collect();
        let cap = rng.random_range(3.0..12.0f64).round();
        let lp = knapsack_lp(&values, &weights, cap);
        let r = solve_mip(&lp, &cfg()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal, "trial {trial}");

        // exhaustive subset enumeration
        let mut best = 0.0f64;
        for mask in 0u32..(1 << n) {
            let (mut w, mut v) = (0.0, 0.0);
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    w += weights[j];
                    v += values[j];
                }
            }
            if w <= cap + 1e-9 {
                best = best.max(v);
            }
        }
        assert!(
            (r.objective_value + best).abs() <= 1e-6 * best.max(1.0),
            "trial {trial}: mip {} vs brute {best}",
            -r.objective_value
        );
        // incumbents only ever improve
        for w in r.incumbent_history.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

#[test]
fn integral_relaxation_skips_branching() {
    // relaxation already integral: 1 node, no branching
    let lp = knapsack_lp(&[5.0, 4.0], &[1.0, 1.0], 2.0);
    let r = solve_mip(&lp, &cfg()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert_eq!(r.nodes, 1);
    assert!((r.objective_value + 9.0).abs() < 1e-9);
}

#[test]
fn mip_relaxation_is_a_lower_bound() {
    let lp = knapsack_lp(&[6.0, 5.0, 4.0], &[3.0, 2.0, 2.0], 4.0);
    let relaxed = solve_lp(&lp, &cfg()).unwrap();
    let integral = solve_mip(&lp, &cfg()).unwrap();
    assert!(relaxed.objective_value <= integral.objective_value + 1e-9);
}

#[test]
fn mip_rejects_general_integers() {
    let mut b = LpBuilder::new("general");
    b.add_var("k", 0.0, 5.0, true).unwrap();
    let lp = b.finish();
    assert!(solve_mip(&lp, &cfg()).is_err());
}

#[test]
fn mip_node_limit_reports_limit_status() {
    let mut c = cfg();
    c.bnb_node_limit = 1;
    let lp = knapsack_lp(&[3.0, 5.0, 4.0, 1.0], &[2.0, 3.0, 2.0, 1.0], 4.0);
    let r = solve_mip(&lp, &c).unwrap();
    assert_eq!(r.status, SolveStatus::IterationLimit);
}

// ---- mps -------------------------------------------------------------------

#[test]
fn mps_empty_lp_is_a_valid_skeleton() {
    let lp = LpBuilder::new("empty").finish();
    let text = export_mps(&lp).unwrap();
    assert!(text.starts_with("NAME"));
    assert!(text.ends_with("ENDATA\n"));
    let back = parse_mps(&text).unwrap();
    assert_eq!(back.num_vars(), 0);
    assert_eq!(back.num_constraints(), 0);
}

#[test]
fn mps_round_trip_objective_equality() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for trial in 0..60 {
        let n = rng.random_range(1..=5);
        let m = rng.random_range(1..=5);
        let lp = random_box_lp(&mut rng, n, m);
        let text = export_mps(&lp).unwrap();
        let back = parse_mps(&text).unwrap();
        let a = solve_lp(&lp, &cfg()).unwrap();
        let b = solve_lp(&back, &cfg()).unwrap();
        assert_eq!(a.status, b.status, "trial {trial}");
        assert!(
            (a.objective_value - b.objective_value).abs() <= 1e-9 * a.objective_value.abs().max(1.0),
            "trial {trial}"
        );
    }
}

#[test]
fn mps_preserves_senses_bounds_offset_and_integrality() {
    let mut b = LpBuilder::new("full");
    let x = b.add_var("x", -2.0, 7.0, false).unwrap();
    let y = b.add_var("y", 0.0, 1.0, true).unwrap();
    let z = b.add_var("z", f64::NEG_INFINITY, f64::INFINITY, false).unwrap();
    let w = b.add_var("w", 3.0, 3.0, false).unwrap();
    b.add_constraint("le", &[(x, 2.0), (y, -1.0)], Sense::Le, 4.0).unwrap();
    b.add_constraint("ge", &[(z, 1.0), (w, 1.5)], Sense::Ge, -1.0).unwrap();
    b.add_constraint("eq", &[(x, 1.0), (z, 1.0)], Sense::Eq, 0.25).unwrap();
    b.add_objective_term(x, 1.5);
    b.add_objective_term(z, -0.5);
    b.add_objective_offset(12.5);
    let lp = b.finish();
    let back = parse_mps(&export_mps(&lp).unwrap()).unwrap();
    assert_eq!(back.num_vars(), 4);
    assert_eq!(back.num_constraints(), 3);
    assert_eq!(back.objective_offset, 12.5);
    let bx = &back.variables[back.var_index("x").unwrap()];
    assert_eq!((bx.lower, bx.upper, bx.is_integer), (-2.0, 7.0, false));
    let by = &back.variables[back.var_index("y").unwrap()];
    assert!(by.is_integer && by.lower == 0.0 && by.upper == 1.0);
    let bz = &back.variables[back.var_index("z").unwrap()];
    assert!(bz.lower.is_infinite() && bz.upper.is_infinite());
    let bw = &back.variables[back.var_index("w").unwrap()];
    assert_eq!((bw.lower, bw.upper), (3.0, 3.0));
    for (a, b) in lp.constraints.iter().zip(&back.constraints) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.sense, b.sense);
        assert_eq!(a.rhs, b.rhs);
        assert_eq!(a.terms, b.terms);
    }
}

#[test]
fn mps_rejects_bad_names() {
    let mut b = LpBuilder::new("bad");
    b.add_var("has space", 0.0, 1.0, false).unwrap();
    let lp = b.finish();
    assert!(export_mps(&lp).is_err());
}

#[test]
fn mps_ranges_parse_into_two_sided_rows() {
    let text = "\
NAME          r
ROWS
 N  COST
 L  lim
COLUMNS
    x         COST      1
    x         lim       1
RHS
    RHS       lim       5
RANGES
    RNG       lim       2
BOUNDS
 UP BND       x         10
ENDATA
";
    let lp = parse_mps(text).unwrap();
    assert_eq!(lp.num_constraints(), 2);
    // 3 ≤ x ≤ 5, minimise x → 3
    let r = solve_lp(&lp, &cfg()).unwrap();
    assert!((r.objective_value - 3.0).abs() < 1e-9);
}

// ---- external hook ---------------------------------------------------------

#[test]
fn solution_file_parser_skips_comments() {
    let parsed = external::parse_solution_file("# c\n=obj= 3\nx 1.5\ny -2\n\n").unwrap();
    assert_eq!(parsed, vec![("x".into(), 1.5), ("y".into(), -2.0)]);
    assert!(external::parse_solution_file("x\n").is_err());
}
