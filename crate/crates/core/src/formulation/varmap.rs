//! Structured lookup from (role, class/tech, hour) to LP variable index.
//!
//! Hours are 0-based everywhere in code and in variable/constraint names
//! (`var.soc.t0042` is hour 42 of the series, matching the series CSV).

/// Whether capacities are decision variables (planning) or constants
/// (operational studies, the oracle comparison).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMode {
    Expand,
    Fixed,
}

/// A capacity as seen by constraint builders: either `existing + new`
/// with `new` a variable, or a plain constant.
#[derive(Debug, Clone, Copy)]
pub enum Cap {
    Var { new: usize, existing: f64 },
    Const(f64),
}

impl Cap {
    /// Append `coef * capacity` to a row being built: variables go into
    /// the term list, constants migrate (negated) into the rhs.
    pub fn add_term(&self, terms: &mut Vec<(usize, f64)>, rhs: &mut f64, coef: f64) {
        match *self {
            Cap::Var { new, existing } => {
                terms.push((new, coef));
                *rhs -= coef * existing;
            }
            Cap::Const(total) => *rhs -= coef * total,
        }
    }

    /// Fixed part of the capacity (total when constant).
    pub fn existing(&self) -> f64 {
        match *self {
            Cap::Var { existing, .. } => existing,
            Cap::Const(total) => total,
        }
    }

    pub fn var(&self) -> Option<usize> {
        match *self {
            Cap::Var { new, .. } => Some(new),
            Cap::Const(_) => None,
        }
    }
}

/// Index map for every declared decision variable of a built model.
///
/// Indices form a bijection with `0..lp.num_vars()`; `debug_check` is
/// exercised by tests.
#[derive(Debug, Clone)]
pub struct VariableMap {
    pub horizon: usize,
    pub n_classes: usize,
    /// Per class: number of oracle units (0 in the fast model).
    pub units_per_class: Vec<usize>,

    // class-indexed hourly roles: [class][t]
    pub online_cap: Vec<Vec<usize>>,
    pub startup: Vec<Vec<usize>>,
    pub shutdown: Vec<Vec<usize>>,
    pub thermal_output: Vec<Vec<usize>>,
    /// CHP classes only.
    pub chp_heat: Vec<Option<Vec<usize>>>,

    pub wind_output: Vec<usize>,
    pub solar_output: Vec<usize>,

    pub p2h_power: Vec<usize>,
    pub h2p_power: Vec<usize>,
    pub h2_produced: Vec<usize>,
    pub h2_consumed: Vec<usize>,
    pub h2_in: Vec<usize>,
    pub h2_out: Vec<usize>,
    pub soc: Vec<usize>,

    // capacities (None in fixed-capacity mode)
    pub new_thermal_cap: Vec<Option<usize>>,
    pub new_wind_cap: Option<usize>,
    pub new_solar_cap: Option<usize>,
    pub storage_energy_cap: Option<usize>,
    pub p2h_cap: Option<usize>,
    pub h2p_cap: Option<usize>,

    // oracle-only roles: [class][unit][t]
    pub unit_commit: Vec<Vec<Vec<usize>>>,
    pub unit_start: Vec<Vec<Vec<usize>>>,
    pub unit_stop: Vec<Vec<Vec<usize>>>,
    pub unit_output: Vec<Vec<Vec<usize>>>,
}

impl VariableMap {
    pub fn empty(n_classes: usize, horizon: usize) -> Self {
        VariableMap {
            horizon,
            n_classes,
            units_per_class: vec![0; n_classes],
            online_cap: vec![Vec::new(); n_classes],
            startup: vec![Vec::new(); n_classes],
            shutdown: vec![Vec::new(); n_classes],
            thermal_output: vec![Vec::new(); n_classes],
            chp_heat: vec![None; n_classes],
            wind_output: Vec::new(),
            solar_output: Vec::new(),
            p2h_power: Vec::new(),
            h2p_power: Vec::new(),
            h2_produced: Vec::new(),
            h2_consumed: Vec::new(),
            h2_in: Vec::new(),
            h2_out: Vec::new(),
            soc: Vec::new(),
            new_thermal_cap: vec![None; n_classes],
            new_wind_cap: None,
            new_solar_cap: None,
            storage_energy_cap: None,
            p2h_cap: None,
            h2p_cap: None,
            unit_commit: vec![Vec::new(); n_classes],
            unit_start: vec![Vec::new(); n_classes],
            unit_stop: vec![Vec::new(); n_classes],
            unit_output: vec![Vec::new(); n_classes],
        }
    }

    /// All declared indices, in declaration order groups. Used to verify
    /// the role↔index bijection.
    pub fn all_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..self.n_classes {
            out.extend(&self.online_cap[i]);
            out.extend(&self.startup[i]);
            out.extend(&self.shutdown[i]);
            out.extend(&self.thermal_output[i]);
            if let Some(h) = &self.chp_heat[i] {
                out.extend(h);
            }
            for j in 0..self.units_per_class[i] {
                out.extend(&self.unit_commit[i][j]);
                out.extend(&self.unit_start[i][j]);
                out.extend(&self.unit_stop[i][j]);
                out.extend(&self.unit_output[i][j]);
            }
        }
        out.extend(&self.wind_output);
        out.extend(&self.solar_output);
        out.extend(&self.p2h_power);
        out.extend(&self.h2p_power);
        out.extend(&self.h2_produced);
        out.extend(&self.h2_consumed);
        out.extend(&self.h2_in);
        out.extend(&self.h2_out);
        out.extend(&self.soc);
        for c in &self.new_thermal_cap {
            out.extend(c.iter());
        }
        out.extend(self.new_wind_cap.iter());
        out.extend(self.new_solar_cap.iter());
        out.extend(self.storage_energy_cap.iter());
        out.extend(self.p2h_cap.iter());
        out.extend(self.h2p_cap.iter());
        out
    }

    /// Panics if the declared indices are not a bijection with
    /// `0..n_vars`.
    pub fn assert_bijection(&self, n_vars: usize) {
        let mut idx = self.all_indices();
        idx.sort_unstable();
        assert_eq!(idx.len(), n_vars, "role indices must cover every LP variable");
        for (k, v) in idx.iter().enumerate() {
            assert_eq!(k, *v, "role indices must be a bijection");
        }
    }
}
