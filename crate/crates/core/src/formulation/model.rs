//! Constraint builders for the planning models.
//!
//! Each numbered constraint family of the formulation is a separately
//! testable method on [`ModelBuilder`]; [`build_fast_model`] composes
//! them into the continuous fast unit-commitment planning LP. The oracle
//! model (see [`super::oracle`]) reuses every downstream family through
//! the same aggregate variables.
//!
//! Constraint names carry their family tag (`eq26.balance.t0042`); hours
//! in names are 0-based, matching the series CSV. Family row counts as a
//! function of (N classes, C CHP classes, T hours, J units):
//!
//! | family                     | rows      |
//! |----------------------------|-----------|
//! | eq8.link                   | N·T       |
//! | eq14.out_le_online         | N·T       |
//! | eq14.online_le_cap         | N·T       |
//! | eq6.start_le_cap           | N·T       |
//! | eq6.stop_le_cap            | N·T       |
//! | eq15.wind / eq16.solar     | T each    |
//! | eq17.output_ceiling        | N·T       |
//! | eq18.ramp_up               | N·T       |
//! | eq19.ramp_down             | N·T       |
//! | eq20_21.min_up             | N·(T−1)   |
//! | eq22_23.min_down           | N·(T−1)   |
//! | eq24.chp_ratio             | C·T       |
//! | eq25.heat_balance          | C·T       |
//! | eq26.balance               | T         |
//! | eq27.p2h_cap / eq28.h2p_cap| T each    |
//! | eq29.p2h_conv / eq30.h2p_conv | T each |
//! | cavern.in_link / out_link  | T each    |
//! | eq31.soc                   | T         |
//! | eq32.soc_cap               | T         |
//! | policy.penetration         | 1         |
//! | policy.soc_cycle           | 1         |
//! | eq1.unit_link (oracle)     | Σ Jᵢ·T    |
//! | eq2.unit_min / eq2.unit_max (oracle) | Σ Jᵢ·T each |
//! | eq3/eq4/eq5 aggregates (oracle) | N·T each |
//! | oracle.agg_output          | N·T       |

use super::lp::{LinearProgram, LpBuilder, LpError, Sense};
use super::varmap::{Cap, CapacityMode, VariableMap};
use crate::domain::{validate, PlanningProblem, Violation};
use thiserror::Error;

/// Hours of a year; annual cost terms are prorated by `T/8760` when the
/// problem asks for it.
pub const HOURS_PER_YEAR: f64 = 8760.0;

#[derive(Debug, Error)]
pub enum FormulationError {
    #[error("invalid problem ({} violations): {}", .0.len(), fmt_violations(.0))]
    InvalidProblem(Vec<Violation>),
    #[error("lp construction: {0}")]
    Lp(#[from] LpError),
    #[error("{0}")]
    Unsupported(String),
}

fn fmt_violations(v: &[Violation]) -> String {
    v.iter()
        .take(4)
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Objective decomposition: the variable indices and constants behind
/// each cost term, so realized cost can be split after a solve.
#[derive(Debug, Clone, Default)]
pub struct CostSlices {
    pub w_a: Vec<(usize, f64)>,
    pub w_f: Vec<(usize, f64)>,
    pub w_v: Vec<(usize, f64)>,
    pub w_h: Vec<(usize, f64)>,
    pub w_a_offset: f64,
    pub w_f_offset: f64,
    pub w_h_offset: f64,
}

impl CostSlices {
    pub fn value(terms: &[(usize, f64)], offset: f64, x: &[f64]) -> f64 {
        terms.iter().map(|&(j, c)| c * x[j]).sum::<f64>() + offset
    }

    pub fn total(&self, x: &[f64]) -> (f64, f64, f64, f64) {
        (
            Self::value(&self.w_a, self.w_a_offset, x),
            Self::value(&self.w_f, self.w_f_offset, x),
            Self::value(&self.w_v, 0.0, x),
            Self::value(&self.w_h, self.w_h_offset, x),
        )
    }
}

/// A fully assembled model: the LP, the variable map, the cost
/// decomposition, and any advisory notes produced while building.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub lp: LinearProgram,
    pub vars: VariableMap,
    pub cost: CostSlices,
    pub notes: Vec<String>,
}

/// Shared state while assembling a model.
pub struct ModelBuilder<'a> {
    pub(crate) p: &'a PlanningProblem,
    pub(crate) b: LpBuilder,
    pub(crate) vm: VariableMap,
    pub(crate) thermal_caps: Vec<Cap>,
    pub(crate) wind_cap: Cap,
    pub(crate) solar_cap: Cap,
    pub(crate) salt_cap: Cap,
    pub(crate) p2h_cap: Cap,
    pub(crate) h2p_cap: Cap,
    pub(crate) cost: CostSlices,
    pub(crate) notes: Vec<String>,
}

impl<'a> ModelBuilder<'a> {
    /// Validate the problem and set up an empty builder. Capacities are
    /// declared here; hourly variables by `declare_hourly_vars`.
    pub fn new(p: &'a PlanningProblem, mode: CapacityMode, name: &str) -> Result<Self, FormulationError> {
        let violations = validate(p);
        if !violations.is_empty() {
            return Err(FormulationError::InvalidProblem(violations));
        }
        let n = p.thermal_classes.len();
        let t = p.series.horizon_hours;
        let mut b = LpBuilder::new(name);
        let mut vm = VariableMap::empty(n, t);

        let mut thermal_caps = Vec::with_capacity(n);
        for (i, c) in p.thermal_classes.iter().enumerate() {
            let cap = match mode {
                CapacityMode::Expand => {
                    let v = b.add_var(format!("var.new_cap.{}", c.id), 0.0, f64::INFINITY, false)?;
                    vm.new_thermal_cap[i] = Some(v);
                    Cap::Var {
                        new: v,
                        existing: c.existing_capacity_mw,
                    }
                }
                CapacityMode::Fixed => Cap::Const(c.existing_capacity_mw),
            };
            thermal_caps.push(cap);
        }
        let s = &p.storage;
        let (wind_cap, solar_cap, salt_cap, p2h_cap, h2p_cap) = match mode {
            CapacityMode::Expand => {
                let w = b.add_var("var.new_cap.wind", 0.0, f64::INFINITY, false)?;
                let so = b.add_var("var.new_cap.solar", 0.0, f64::INFINITY, false)?;
                // the geological limit caps the buildable energy volume
                let salt_ub = (s.energy_cap_limit_mwh - s.existing_energy_mwh).max(0.0);
                let sc = b.add_var("var.cap.salt", 0.0, salt_ub, false)?;
                let pc = b.add_var("var.cap.p2h", 0.0, f64::INFINITY, false)?;
                let hc = b.add_var("var.cap.h2p", 0.0, f64::INFINITY, false)?;
                vm.new_wind_cap = Some(w);
                vm.new_solar_cap = Some(so);
                vm.storage_energy_cap = Some(sc);
                vm.p2h_cap = Some(pc);
                vm.h2p_cap = Some(hc);
                (
                    Cap::Var { new: w, existing: p.wind.existing_capacity_mw },
                    Cap::Var { new: so, existing: p.solar.existing_capacity_mw },
                    Cap::Var { new: sc, existing: s.existing_energy_mwh },
                    Cap::Var { new: pc, existing: s.existing_p2h_mw },
                    Cap::Var { new: hc, existing: s.existing_h2p_mw },
                )
            }
            CapacityMode::Fixed => (
                Cap::Const(p.wind.existing_capacity_mw),
                Cap::Const(p.solar.existing_capacity_mw),
                Cap::Const(s.existing_energy_mwh.min(s.energy_cap_limit_mwh)),
                Cap::Const(s.existing_p2h_mw),
                Cap::Const(s.existing_h2p_mw),
            ),
        };

        let mut notes = Vec::new();
        if s.p2h_min_load_frac > 0.0 {
            notes.push(format!(
                "storage.p2h_min_load_frac = {} is informational: the LP admits any electrolyzer load in [0, cap]; \
                 a hard floor would need converter commitment",
                s.p2h_min_load_frac
            ));
        }

        Ok(ModelBuilder {
            p,
            b,
            vm,
            thermal_caps,
            wind_cap,
            solar_cap,
            salt_cap,
            p2h_cap,
            h2p_cap,
            cost: CostSlices::default(),
            notes,
        })
    }

    pub(crate) fn horizon(&self) -> usize {
        self.p.series.horizon_hours
    }

    /// Declare the hourly variables common to both models (aggregate
    /// commitment, outputs, hydrogen system).
    pub fn declare_hourly_vars(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let inf = f64::INFINITY;
        for (i, c) in self.p.thermal_classes.iter().enumerate() {
            let id = &c.id;
            for (role, store) in [
                ("online_cap", &mut self.vm.online_cap[i]),
                ("startup", &mut self.vm.startup[i]),
                ("shutdown", &mut self.vm.shutdown[i]),
                ("output", &mut self.vm.thermal_output[i]),
            ] {
                for t in 0..t_len {
                    store.push(self.b.add_var(format!("var.{role}.{id}.t{t:04}"), 0.0, inf, false)?);
                }
            }
            if c.is_chp {
                let mut heat = Vec::with_capacity(t_len);
                for t in 0..t_len {
                    heat.push(self.b.add_var(format!("var.heat.{id}.t{t:04}"), 0.0, inf, false)?);
                }
                self.vm.chp_heat[i] = Some(heat);
            }
        }
        for t in 0..t_len {
            self.vm.wind_output.push(self.b.add_var(format!("var.wind.t{t:04}"), 0.0, inf, false)?);
        }
        for t in 0..t_len {
            self.vm.solar_output.push(self.b.add_var(format!("var.solar.t{t:04}"), 0.0, inf, false)?);
        }
        let s = &self.p.storage;
        for t in 0..t_len {
            self.vm.p2h_power.push(self.b.add_var(format!("var.p2h.t{t:04}"), 0.0, inf, false)?);
        }
        for t in 0..t_len {
            self.vm.h2p_power.push(self.b.add_var(format!("var.h2p.t{t:04}"), 0.0, inf, false)?);
        }
        for t in 0..t_len {
            self.vm.h2_produced.push(self.b.add_var(format!("var.h2_prod.t{t:04}"), 0.0, inf, false)?);
        }
        for t in 0..t_len {
            self.vm.h2_consumed.push(self.b.add_var(format!("var.h2_cons.t{t:04}"), 0.0, inf, false)?);
        }
        // hourly injection/extraction flow caps are plain bounds
        for t in 0..t_len {
            self.vm.h2_in.push(self.b.add_var(format!("var.h2_in.t{t:04}"), 0.0, s.max_flow_in_mw, false)?);
        }
        for t in 0..t_len {
            self.vm.h2_out.push(self.b.add_var(format!("var.h2_out.t{t:04}"), 0.0, s.max_flow_out_mw, false)?);
        }
        for t in 0..t_len {
            self.vm.soc.push(self.b.add_var(format!("var.soc.t{t:04}"), 0.0, inf, false)?);
        }
        Ok(())
    }

    fn row(
        &mut self,
        name: String,
        terms: Vec<(usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> Result<(), FormulationError> {
        self.b.add_constraint(name, &terms, sense, rhs)?;
        Ok(())
    }

    /// Continuous commitment linking with the configured initial online
    /// capacity, plus the total-capacity ceilings on startup/shutdown.
    pub fn add_commitment_linking(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        for i in 0..self.p.thermal_classes.len() {
            let id = self.p.thermal_classes[i].id.clone();
            let cap = self.thermal_caps[i];
            for t in 0..t_len {
                // eq8: online(t) - online(t-1) = start(t) - stop(t)
                let mut terms = vec![
                    (self.vm.online_cap[i][t], 1.0),
                    (self.vm.startup[i][t], -1.0),
                    (self.vm.shutdown[i][t], 1.0),
                ];
                let mut rhs = 0.0;
                if t == 0 {
                    rhs = self.p.thermal_classes[i].initial_online_mw;
                } else {
                    terms.push((self.vm.online_cap[i][t - 1], -1.0));
                }
                self.row(format!("eq8.link.{id}.t{t:04}"), terms, Sense::Eq, rhs)?;

                // eq6: start/stop capacity never exceeds the class total
                for (fam, var) in [("eq6.start_le_cap", self.vm.startup[i][t]), ("eq6.stop_le_cap", self.vm.shutdown[i][t])] {
                    let mut terms = vec![(var, 1.0)];
                    let mut rhs = 0.0;
                    cap.add_term(&mut terms, &mut rhs, -1.0);
                    self.row(format!("{fam}.{id}.t{t:04}"), terms, Sense::Le, rhs)?;
                }
            }
        }
        Ok(())
    }

    /// Hourly output bounds: thermal output under online capacity under
    /// total capacity; renewables under capacity-factor-scaled capacity.
    pub fn add_output_bounds(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        for i in 0..self.p.thermal_classes.len() {
            let id = self.p.thermal_classes[i].id.clone();
            let cap = self.thermal_caps[i];
            for t in 0..t_len {
                self.row(
                    format!("eq14.out_le_online.{id}.t{t:04}"),
                    vec![(self.vm.thermal_output[i][t], 1.0), (self.vm.online_cap[i][t], -1.0)],
                    Sense::Le,
                    0.0,
                )?;
                let mut terms = vec![(self.vm.online_cap[i][t], 1.0)];
                let mut rhs = 0.0;
                cap.add_term(&mut terms, &mut rhs, -1.0);
                self.row(format!("eq14.online_le_cap.{id}.t{t:04}"), terms, Sense::Le, rhs)?;
            }
        }
        for t in 0..t_len {
            let alpha = self.p.series.wind_cf[t];
            let mut terms = vec![(self.vm.wind_output[t], 1.0)];
            let mut rhs = 0.0;
            self.wind_cap.add_term(&mut terms, &mut rhs, -alpha);
            self.row(format!("eq15.wind.t{t:04}"), terms, Sense::Le, rhs)?;
        }
        for t in 0..t_len {
            let beta = self.p.series.solar_cf[t];
            let mut terms = vec![(self.vm.solar_output[t], 1.0)];
            let mut rhs = 0.0;
            self.solar_cap.add_term(&mut terms, &mut rhs, -beta);
            self.row(format!("eq16.solar.t{t:04}"), terms, Sense::Le, rhs)?;
        }
        Ok(())
    }

    /// Ramping with start-up/shut-down allowances, coefficients exactly
    /// as printed; the hour after the horizon has no shutdown term.
    pub fn add_ramping(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let p = self.p;
        for (i, c) in p.thermal_classes.iter().enumerate() {
            let id = c.id.clone();
            let (mu_max, mu_min) = (c.max_output_ratio, c.min_output_ratio);
            let (ru, rd) = (c.ramp_up_ratio, c.ramp_down_ratio);
            let (vs, vd) = (c.startup_ramp_ratio, c.shutdown_ramp_ratio);
            for t in 0..t_len {
                // eq17: out ≤ μ̄(online - start - stop⁺) + VS·start + VD·stop⁺
                let mut terms = vec![
                    (self.vm.thermal_output[i][t], 1.0),
                    (self.vm.online_cap[i][t], -mu_max),
                    (self.vm.startup[i][t], mu_max - vs),
                ];
                if t + 1 < t_len {
                    terms.push((self.vm.shutdown[i][t + 1], mu_max - vd));
                }
                self.b.add_constraint(format!("eq17.output_ceiling.{id}.t{t:04}"), &terms, Sense::Le, 0.0)?;

                // eq18: out(t) - out(t-1) ≤ RU(online - start) + VS·start - μ_·stop
                let mut terms = vec![
                    (self.vm.thermal_output[i][t], 1.0),
                    (self.vm.online_cap[i][t], -ru),
                    (self.vm.startup[i][t], ru - vs),
                    (self.vm.shutdown[i][t], mu_min),
                ];
                let rhs = if t == 0 {
                    c.initial_output_mw
                } else {
                    terms.push((self.vm.thermal_output[i][t - 1], -1.0));
                    0.0
                };
                self.b.add_constraint(format!("eq18.ramp_up.{id}.t{t:04}"), &terms, Sense::Le, rhs)?;

                // eq19: out(t-1) - out(t) ≤ RD(online - start) - μ_·start + VD·stop
                let mut terms = vec![
                    (self.vm.thermal_output[i][t], -1.0),
                    (self.vm.online_cap[i][t], -rd),
                    (self.vm.startup[i][t], rd + mu_min),
                    (self.vm.shutdown[i][t], -vd),
                ];
                let rhs = if t == 0 {
                    -c.initial_output_mw
                } else {
                    terms.push((self.vm.thermal_output[i][t - 1], 1.0));
                    0.0
                };
                self.b.add_constraint(format!("eq19.ramp_down.{id}.t{t:04}"), &terms, Sense::Le, rhs)?;
            }
        }
        Ok(())
    }

    /// Minimum up/down windows: capacity started in the last `UT−1`
    /// hours cannot shut down, capacity stopped in the last `DT−1` hours
    /// cannot restart. Horizons shorter than the windows were rejected
    /// by validation.
    pub fn add_min_up_down(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let p = self.p;
        for (i, c) in p.thermal_classes.iter().enumerate() {
            let id = c.id.clone();
            let ut = c.min_up_hours as usize;
            let dt = c.min_down_hours as usize;
            if ut > t_len || dt > t_len {
                return Err(FormulationError::Unsupported(format!(
                    "class {id}: min up/down window exceeds horizon"
                )));
            }
            let cap = self.thermal_caps[i];
            for j in 1..t_len {
                // eq20 (j < UT sums every earlier start) / eq21 (window)
                let lo = if j < ut { 0 } else { j + 1 - ut };
                let mut terms = vec![(self.vm.shutdown[i][j], 1.0), (self.vm.online_cap[i][j - 1], -1.0)];
                for k in lo..j {
                    terms.push((self.vm.startup[i][k], 1.0));
                }
                self.b
                    .add_constraint(format!("eq20_21.min_up.{id}.t{j:04}"), &terms, Sense::Le, 0.0)?;

                // eq22/eq23 mirror with headroom I - online
                let lo = if j < dt { 0 } else { j + 1 - dt };
                let mut terms = vec![(self.vm.startup[i][j], 1.0), (self.vm.online_cap[i][j - 1], 1.0)];
                for k in lo..j {
                    terms.push((self.vm.shutdown[i][k], 1.0));
                }
                let mut rhs = 0.0;
                cap.add_term(&mut terms, &mut rhs, -1.0);
                self.b
                    .add_constraint(format!("eq22_23.min_down.{id}.t{j:04}"), &terms, Sense::Le, rhs)?;
            }
        }
        Ok(())
    }

    /// CHP thermoelectric coupling and the heat balance. The electric
    /// side of the CHP class is its ordinary output variable.
    pub fn add_chp_and_heat(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let heat_needed = self.p.has_heat_demand();
        let chp = self.p.chp_index();
        if heat_needed && chp.is_none() {
            // validate() already rejects this; keep the guard local too
            return Err(FormulationError::Unsupported(
                "heat demand present but no CHP class".into(),
            ));
        }
        let Some(i) = chp else { return Ok(()) };
        let te = self.p.thermal_classes[i]
            .thermoelectric_ratio
            .expect("validated CHP class has a ratio");
        let id = self.p.thermal_classes[i].id.clone();
        let heat = self.vm.chp_heat[i].clone().expect("CHP heat variables declared");
        for t in 0..t_len {
            self.row(
                format!("eq24.chp_ratio.{id}.t{t:04}"),
                vec![(self.vm.thermal_output[i][t], 1.0), (heat[t], -te)],
                Sense::Eq,
                0.0,
            )?;
            // printed as an electric-side identity; implemented on the
            // heat side so eq24 keeps both consistent
            self.row(
                format!("eq25.heat_balance.t{t:04}"),
                vec![(heat[t], 1.0)],
                Sense::Eq,
                self.p.series.heat_demand_mw[t],
            )?;
        }
        Ok(())
    }

    /// Hourly power balance: thermal + wind + solar + storage discharge
    /// − storage charge = demand. Equality; infeasibility is the signal
    /// for insufficient capacity.
    pub fn add_energy_balance(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        for t in 0..t_len {
            let mut terms = Vec::with_capacity(self.p.thermal_classes.len() + 4);
            for i in 0..self.p.thermal_classes.len() {
                terms.push((self.vm.thermal_output[i][t], 1.0));
            }
            terms.push((self.vm.wind_output[t], 1.0));
            terms.push((self.vm.solar_output[t], 1.0));
            terms.push((self.vm.h2p_power[t], 1.0));
            terms.push((self.vm.p2h_power[t], -1.0));
            self.row(format!("eq26.balance.t{t:04}"), terms, Sense::Eq, self.p.series.demand_mw[t])?;
        }
        Ok(())
    }

    /// Conversion stages, cavern coupling, stock balance with leakage,
    /// stock ceiling, and the cyclic closure that stops the optimiser
    /// monetising free initial hydrogen.
    pub fn add_hydrogen_system(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let s = &self.p.storage;
        let (eta_p2h, eta_h2p) = (s.eta_p2h, s.eta_h2p);
        let (eta_in, eta_out) = (s.eta_in, s.eta_out);
        let leak = s.leak_rate_per_hour;
        let isf = s.initial_soc_frac;
        let (p2h_cap, h2p_cap, salt_cap) = (self.p2h_cap, self.h2p_cap, self.salt_cap);

        for t in 0..t_len {
            // eq27/eq28: converter throughput under built capacity
            let mut terms = vec![(self.vm.p2h_power[t], 1.0)];
            let mut rhs = 0.0;
            p2h_cap.add_term(&mut terms, &mut rhs, -1.0);
            self.row(format!("eq27.p2h_cap.t{t:04}"), terms, Sense::Le, rhs)?;

            let mut terms = vec![(self.vm.h2_consumed[t], 1.0)];
            let mut rhs = 0.0;
            h2p_cap.add_term(&mut terms, &mut rhs, -1.0);
            self.row(format!("eq28.h2p_cap.t{t:04}"), terms, Sense::Le, rhs)?;

            // eq29/eq30: conversion efficiencies
            self.row(
                format!("eq29.p2h_conv.t{t:04}"),
                vec![(self.vm.h2_produced[t], 1.0), (self.vm.p2h_power[t], -eta_p2h)],
                Sense::Eq,
                0.0,
            )?;
            self.row(
                format!("eq30.h2p_conv.t{t:04}"),
                vec![(self.vm.h2p_power[t], 1.0), (self.vm.h2_consumed[t], -eta_h2p)],
                Sense::Eq,
                0.0,
            )?;

            // all hydrogen transits the cavern: no production-to-fuel-cell bypass
            self.row(
                format!("cavern.in_link.t{t:04}"),
                vec![(self.vm.h2_in[t], 1.0), (self.vm.h2_produced[t], -1.0)],
                Sense::Eq,
                0.0,
            )?;
            self.row(
                format!("cavern.out_link.t{t:04}"),
                vec![(self.vm.h2_out[t], 1.0), (self.vm.h2_consumed[t], -1.0)],
                Sense::Eq,
                0.0,
            )?;

            // eq31: (1+L)·soc(t) = soc(t-1) + η_in·in(t) - out(t)/η_out,
            // anchored at soc(-1) = initial_soc_frac · built capacity
            let mut terms = vec![
                (self.vm.soc[t], 1.0 + leak),
                (self.vm.h2_in[t], -eta_in),
                (self.vm.h2_out[t], 1.0 / eta_out),
            ];
            let mut rhs = 0.0;
            if t == 0 {
                salt_cap.add_term(&mut terms, &mut rhs, -isf);
            } else {
                terms.push((self.vm.soc[t - 1], -1.0));
            }
            self.row(format!("eq31.soc.t{t:04}"), terms, Sense::Eq, rhs)?;

            // eq32: stock under built energy capacity
            let mut terms = vec![(self.vm.soc[t], 1.0)];
            let mut rhs = 0.0;
            salt_cap.add_term(&mut terms, &mut rhs, -1.0);
            self.row(format!("eq32.soc_cap.t{t:04}"), terms, Sense::Le, rhs)?;
        }

        // cyclic closure: end at least as full as the start
        let mut terms = vec![(self.vm.soc[t_len - 1], 1.0)];
        let mut rhs = 0.0;
        salt_cap.add_term(&mut terms, &mut rhs, isf);
        self.row("policy.soc_cycle".into(), terms, Sense::Ge, rhs)?;
        Ok(())
    }

    /// Renewable generation-share floor: wind + solar energy over the
    /// horizon must reach ρ of demand energy.
    pub fn add_penetration_floor(&mut self) -> Result<(), FormulationError> {
        let t_len = self.horizon();
        let rho = self.p.penetration_target;
        let demand: f64 = self.p.series.demand_mw.iter().sum();
        let mut terms = Vec::with_capacity(2 * t_len);
        for t in 0..t_len {
            terms.push((self.vm.wind_output[t], 1.0));
            terms.push((self.vm.solar_output[t], 1.0));
        }
        self.row("policy.penetration".into(), terms, Sense::Ge, rho * demand)?;
        Ok(())
    }

    /// Objective: investment + fixed O&M + fuel/start-up + storage cost.
    /// Each term's indices are recorded in [`CostSlices`]. Specific
    /// costs arrive per kW and capacities are in MW, hence the factor
    /// 1000; annual terms are prorated to the horizon when requested.
    pub fn build_objective(&mut self) -> Result<(), FormulationError> {
        let p = self.p;
        let dt = p.series.dt_hours;
        let t_len = self.horizon();
        let phi = if p.prorate_capital_to_horizon {
            t_len as f64 * dt / HOURS_PER_YEAR
        } else {
            1.0
        };

        let push = |slice: &mut Vec<(usize, f64)>, offset: &mut f64, cap: Cap, per_kw_yr: f64| {
            let per_mw = per_kw_yr * 1000.0 * phi;
            match cap {
                Cap::Var { new, existing } => {
                    slice.push((new, per_mw));
                    *offset += per_mw * existing;
                }
                Cap::Const(total) => *offset += per_mw * total,
            }
        };

        // W_a: annualised investment on new builds only
        for (i, c) in p.thermal_classes.iter().enumerate() {
            if let Cap::Var { new, .. } = self.thermal_caps[i] {
                self.cost.w_a.push((new, c.amortized_capital_per_kw_yr * 1000.0 * phi));
            }
        }
        if let Cap::Var { new, .. } = self.wind_cap {
            self.cost.w_a.push((new, p.wind.amortized_capital_per_kw_yr * 1000.0 * phi));
        }
        if let Cap::Var { new, .. } = self.solar_cap {
            self.cost.w_a.push((new, p.solar.amortized_capital_per_kw_yr * 1000.0 * phi));
        }

        // W_f: fixed O&M on total capacity, existing included
        for (i, c) in p.thermal_classes.iter().enumerate() {
            let f = c.om_cost_frac * c.capital_cost_per_kw;
            push(&mut self.cost.w_f, &mut self.cost.w_f_offset, self.thermal_caps[i], f);
        }
        push(&mut self.cost.w_f, &mut self.cost.w_f_offset, self.wind_cap, p.wind.om_cost_per_kw_yr);
        push(&mut self.cost.w_f, &mut self.cost.w_f_offset, self.solar_cap, p.solar.om_cost_per_kw_yr);

        // W_v: fuel on generated energy plus start-up cost on started
        // capacity (Δt retained as printed, inert at 1 h)
        for (i, c) in p.thermal_classes.iter().enumerate() {
            for t in 0..t_len {
                self.cost.w_v.push((self.vm.thermal_output[i][t], c.fuel_cost_per_mwh * dt));
                self.cost.w_v.push((self.vm.startup[i][t], c.startup_cost_per_mw * dt));
            }
        }

        // W_h: storage energy + converter capital, plus throughput O&M.
        // Converter O&M arrives as $/kW-yr; spread over the 8760 hours of
        // a rated year it prices throughput at per-MWh scale.
        let s = &p.storage;
        push(&mut self.cost.w_h, &mut self.cost.w_h_offset, self.salt_cap, s.energy_capital_per_kwh_yr);
        push(&mut self.cost.w_h, &mut self.cost.w_h_offset, self.p2h_cap, s.p2h_capital_per_kw_yr);
        push(&mut self.cost.w_h, &mut self.cost.w_h_offset, self.h2p_cap, s.h2p_capital_per_kw_yr);
        let f_p2h = s.p2h_om_per_kw_yr * 1000.0 / HOURS_PER_YEAR;
        let f_h2p = s.h2p_om_per_kw_yr * 1000.0 / HOURS_PER_YEAR;
        for t in 0..t_len {
            self.cost.w_h.push((self.vm.p2h_power[t], f_p2h * dt));
            self.cost.w_h.push((self.vm.h2_consumed[t], f_h2p * dt));
        }

        for slice in [&self.cost.w_a, &self.cost.w_f, &self.cost.w_v, &self.cost.w_h] {
            for &(j, coef) in slice {
                self.b.add_objective_term(j, coef);
            }
        }
        self.b
            .add_objective_offset(self.cost.w_a_offset + self.cost.w_f_offset + self.cost.w_h_offset);
        Ok(())
    }

    pub fn finish(self) -> BuiltModel {
        let lp = self.b.finish();
        BuiltModel {
            lp,
            vars: self.vm,
            cost: self.cost,
            notes: self.notes,
        }
    }
}

/// Assemble the fast continuous unit-commitment planning model.
pub fn build_fast_model(p: &PlanningProblem, mode: CapacityMode) -> Result<BuiltModel, FormulationError> {
    let mut mb = ModelBuilder::new(p, mode, "fast_uc")?;
    mb.declare_hourly_vars()?;
    mb.add_commitment_linking()?;
    mb.add_output_bounds()?;
    mb.add_ramping()?;
    mb.add_min_up_down()?;
    mb.add_chp_and_heat()?;
    mb.add_energy_balance()?;
    mb.add_hydrogen_system()?;
    mb.add_penetration_floor()?;
    mb.build_objective()?;
    let built = mb.finish();
    built.vars.assert_bijection(built.lp.num_vars());
    Ok(built)
}
