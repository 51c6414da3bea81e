//! Solver-agnostic linear program: bounded variables (with integrality
//! flags), sparse linear constraints, and a minimising linear objective.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate constraint name `{0}`")]
    DuplicateConstraint(String),
    #[error("variable `{0}`: lower bound {1} > upper bound {2}")]
    BadBounds(String, f64, f64),
    #[error("constraint `{0}` references undeclared variable index {1}")]
    BadIndex(String, usize),
    #[error("non-finite coefficient in `{0}`")]
    NonFinite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    /// `f64::NEG_INFINITY` = free below.
    pub lower: f64,
    /// `f64::INFINITY` = free above.
    pub upper: f64,
    pub is_integer: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    /// Sparse (variable index, coefficient), indices strictly increasing.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Canonical minimisation LP. Construct through [`LpBuilder`], which
/// enforces unique names, valid bounds, and in-range indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearProgram {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Sparse objective, minimise.
    pub objective: Vec<(usize, f64)>,
    /// Constant added to every objective value (e.g. O&M on existing
    /// capacity, which no decision can change).
    pub objective_offset: f64,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Objective value of a point (includes the offset).
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(j, c)| c * x[j]).sum::<f64>() + self.objective_offset
    }

    /// Signed violation of one constraint at `x`: positive means broken,
    /// by that many units.
    pub fn constraint_violation(&self, c: &Constraint, x: &[f64]) -> f64 {
        let lhs: f64 = c.terms.iter().map(|&(j, a)| a * x[j]).sum();
        match c.sense {
            Sense::Le => lhs - c.rhs,
            Sense::Ge => c.rhs - lhs,
            Sense::Eq => (lhs - c.rhs).abs(),
        }
    }

    /// Largest constraint violation and bound violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            worst = worst.max(self.constraint_violation(c, x));
        }
        for (v, &xi) in self.variables.iter().zip(x) {
            worst = worst.max(v.lower - xi).max(xi - v.upper);
        }
        worst
    }

    pub fn has_integers(&self) -> bool {
        self.variables.iter().any(|v| v.is_integer)
    }
}

/// Incremental LP construction with name/index checking.
#[derive(Debug)]
pub struct LpBuilder {
    lp: LinearProgram,
    var_names: HashMap<String, usize>,
    con_names: HashMap<String, usize>,
}

impl LpBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        LpBuilder {
            lp: LinearProgram {
                name: name.into(),
                variables: Vec::new(),
                constraints: Vec::new(),
                objective: Vec::new(),
                objective_offset: 0.0,
            },
            var_names: HashMap::new(),
            con_names: HashMap::new(),
        }
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lower: f64,
        upper: f64,
        is_integer: bool,
    ) -> Result<usize, LpError> {
        let name = name.into();
        if lower > upper {
            return Err(LpError::BadBounds(name, lower, upper));
        }
        if lower.is_nan() || upper.is_nan() {
            return Err(LpError::NonFinite(name));
        }
        let idx = self.lp.variables.len();
        if self.var_names.insert(name.clone(), idx).is_some() {
            return Err(LpError::DuplicateVariable(name));
        }
        self.lp.variables.push(Variable {
            name,
            lower,
            upper,
            is_integer,
        });
        Ok(idx)
    }

    /// Add a constraint; duplicate indices in `terms` are merged and
    /// zero coefficients dropped.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: &[(usize, f64)],
        sense: Sense,
        rhs: f64,
    ) -> Result<usize, LpError> {
        let name = name.into();
        if !rhs.is_finite() {
            return Err(LpError::NonFinite(name));
        }
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
        for &(j, a) in terms {
            if j >= self.lp.variables.len() {
                return Err(LpError::BadIndex(name, j));
            }
            if !a.is_finite() {
                return Err(LpError::NonFinite(name));
            }
            merged.push((j, a));
        }
        merged.sort_by_key(|&(j, _)| j);
        merged.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        merged.retain(|&(_, a)| a != 0.0);

        let idx = self.lp.constraints.len();
        if self.con_names.insert(name.clone(), idx).is_some() {
            return Err(LpError::DuplicateConstraint(name));
        }
        self.lp.constraints.push(Constraint {
            name,
            terms: merged,
            sense,
            rhs,
        });
        Ok(idx)
    }

    /// Add `coef` to the objective coefficient of variable `j`.
    pub fn add_objective_term(&mut self, j: usize, coef: f64) {
        debug_assert!(j < self.lp.variables.len());
        if coef != 0.0 {
            self.lp.objective.push((j, coef));
        }
    }

    pub fn add_objective_offset(&mut self, c: f64) {
        self.lp.objective_offset += c;
    }

    pub fn num_vars(&self) -> usize {
        self.lp.variables.len()
    }

    pub fn finish(mut self) -> LinearProgram {
        self.lp.objective.sort_by_key(|&(j, _)| j);
        self.lp.objective.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        self.lp.objective.retain(|&(_, c)| c != 0.0);
        self.lp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_checks_names_bounds_indices() {
        let mut b = LpBuilder::new("t");
        let x = b.add_var("x", 0.0, 1.0, false).unwrap();
        assert!(b.add_var("x", 0.0, 1.0, false).is_err());
        assert!(b.add_var("y", 2.0, 1.0, false).is_err());
        assert!(b.add_constraint("c", &[(x + 5, 1.0)], Sense::Le, 1.0).is_err());
        b.add_constraint("c", &[(x, 1.0)], Sense::Le, 1.0).unwrap();
        assert!(b.add_constraint("c", &[(x, 1.0)], Sense::Le, 2.0).is_err());
    }

    #[test]
    fn duplicate_terms_are_merged() {
        let mut b = LpBuilder::new("t");
        let x = b.add_var("x", 0.0, 1.0, false).unwrap();
        let y = b.add_var("y", 0.0, 1.0, false).unwrap();
        let c = b
            .add_constraint("c", &[(y, 1.0), (x, 2.0), (y, -1.0), (x, 0.5)], Sense::Eq, 0.0)
            .unwrap();
        let lp = b.finish();
        assert_eq!(lp.constraints[c].terms, vec![(x, 2.5)]);
    }

    #[test]
    fn objective_value_includes_offset() {
        let mut b = LpBuilder::new("t");
        let x = b.add_var("x", 0.0, 10.0, false).unwrap();
        b.add_objective_term(x, 3.0);
        b.add_objective_offset(7.0);
        let lp = b.finish();
        assert_eq!(lp.objective_value(&[2.0]), 13.0);
    }
}
