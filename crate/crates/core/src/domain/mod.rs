//! Domain types, validation, and parameter plumbing.
//!
//! Everything here is immutable after construction and safe to share
//! read-only across threads. Units are spelled out in field names:
//! capacities in MW (MWh for storage energy), specific costs in $/kW or
//! $/kWh as noted, hourly series aligned to a fixed 1-hour step.

mod config;
pub mod presets;
mod series;
#[cfg(test)]
pub(crate) mod testutil;
mod validate;

pub use config::{load_problem, ProblemConfig, StorageConfig, CONFIG_SCHEMA_VERSION};
pub use series::{gen_seasonal_series, read_series_csv, write_series_csv, SeriesParams};
pub use validate::{validate, Violation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from domain-level operations (validation failures are *data*,
/// not errors — see [`validate`]).
#[derive(Debug, Error)]
pub enum DomainError {
    #[error("{0}")]
    BadArgument(String),
    #[error("invalid problem: {0} violation(s): {1}")]
    InvalidProblem(usize, String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

/// One class of thermal generating units (coal / CHP / gas / ...).
///
/// A class aggregates identical units; the planning model works on class
/// totals, the oracle model on `unit_size_mw` blocks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThermalUnitClass {
    pub id: String,
    pub existing_capacity_mw: f64,
    /// Overnight capital cost, $/kW.
    pub capital_cost_per_kw: f64,
    /// Fixed O&M as a fraction of capital cost per year.
    pub om_cost_frac: f64,
    /// Fuel cost, $/MWh.
    pub fuel_cost_per_mwh: f64,
    /// Start-up cost, $/MW of started capacity.
    pub startup_cost_per_mw: f64,
    /// Maximum output as a fraction of online capacity.
    pub max_output_ratio: f64,
    /// Minimum stable output as a fraction of online capacity.
    pub min_output_ratio: f64,
    /// Upward ramp per hour, fraction of online capacity.
    pub ramp_up_ratio: f64,
    /// Downward ramp per hour, fraction of online capacity.
    pub ramp_down_ratio: f64,
    /// Output ceiling in the start-up hour, fraction of started capacity.
    pub startup_ramp_ratio: f64,
    /// Output ceiling in the shut-down hour, fraction of stopped capacity.
    pub shutdown_ramp_ratio: f64,
    pub min_up_hours: u32,
    pub min_down_hours: u32,
    /// tCO2 per MWh generated.
    pub emission_factor_t_per_mwh: f64,
    pub is_chp: bool,
    /// Electric output per unit of heat output; required iff `is_chp`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub thermoelectric_ratio: Option<f64>,
    /// Nameplate size of one unit, MW. Only the oracle model uses it.
    pub unit_size_mw: f64,
    /// Annualised capital, $/kW-yr (see [`amortize`]).
    pub amortized_capital_per_kw_yr: f64,
    /// Online capacity before hour 1 (cold start by default).
    #[serde(default)]
    pub initial_online_mw: f64,
    /// Output before hour 1 (cold start by default).
    #[serde(default)]
    pub initial_output_mw: f64,
}

/// Which variable-renewable class a record describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenewableKind {
    Wind,
    Solar,
}

/// One variable-renewable class; exactly one per kind per problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenewableClass {
    pub kind: RenewableKind,
    pub existing_capacity_mw: f64,
    pub capital_cost_per_kw: f64,
    /// Fixed O&M, $/kW-yr.
    pub om_cost_per_kw_yr: f64,
    /// Annualised capital, $/kW-yr.
    pub amortized_capital_per_kw_yr: f64,
}

/// Storage technology family (Table-style scenario parameterisations all
/// share one structure; see [`StorageTech`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StorageKind {
    Electrochemical,
    Tank,
    SaltCavern,
}

impl std::fmt::Display for StorageKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            StorageKind::Electrochemical => "electrochemical",
            StorageKind::Tank => "tank",
            StorageKind::SaltCavern => "salt_cavern",
        };
        f.write_str(s)
    }
}

/// One storage technology: conversion stages (power-to-hydrogen in,
/// hydrogen-to-power out), the store itself, and its cost parameters.
///
/// Electrochemical storage reuses the same structure with unit conversion
/// efficiencies: round-trip losses are carried entirely by
/// `eta_in`/`eta_out`, and the "converter" capacities become the charge
/// and discharge power ratings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StorageTech {
    pub kind: StorageKind,
    /// Annualised energy-capacity cost, $/kWh-yr.
    pub energy_capital_per_kwh_yr: f64,
    /// Annualised charge-converter (electrolyzer) capital, $/kW-yr.
    pub p2h_capital_per_kw_yr: f64,
    /// Charge-converter O&M, $/kW-yr (applied to hourly throughput after
    /// prorating over the hours of a year).
    pub p2h_om_per_kw_yr: f64,
    /// Annualised discharge-converter (fuel cell) capital, $/kW-yr.
    pub h2p_capital_per_kw_yr: f64,
    /// Discharge-converter O&M, $/kW-yr (prorated like `p2h_om`).
    pub h2p_om_per_kw_yr: f64,
    /// MWh of hydrogen produced per MWh of electricity consumed.
    pub eta_p2h: f64,
    /// MWh of electricity produced per MWh of hydrogen consumed.
    pub eta_h2p: f64,
    /// Injection efficiency into the store.
    pub eta_in: f64,
    /// Extraction efficiency out of the store.
    pub eta_out: f64,
    /// Fraction of stored energy lost per hour.
    pub leak_rate_per_hour: f64,
    /// Cap on hourly injection, MW-equivalent.
    pub max_flow_in_mw: f64,
    /// Cap on hourly extraction, MW-equivalent.
    pub max_flow_out_mw: f64,
    /// Geological/site limit on buildable energy capacity, MWh
    /// (`f64::INFINITY` = unbounded).
    #[serde(
        default = "unbounded",
        skip_serializing_if = "is_unbounded",
        deserialize_with = "de_opt_inf"
    )]
    pub energy_cap_limit_mwh: f64,
    /// Stored energy at hour 0 as a fraction of built capacity.
    pub initial_soc_frac: f64,
    /// Partial-load floor of the charge converter (documentation only in
    /// the LP; a hard floor would need converter commitment).
    #[serde(default)]
    pub p2h_min_load_frac: f64,
    /// Pre-existing capacities, used by fixed-capacity studies.
    #[serde(default)]
    pub existing_energy_mwh: f64,
    #[serde(default)]
    pub existing_p2h_mw: f64,
    #[serde(default)]
    pub existing_h2p_mw: f64,
}

fn unbounded() -> f64 {
    f64::INFINITY
}

fn is_unbounded(v: &f64) -> bool {
    v.is_infinite()
}

/// JSON has no Infinity literal; `null`/absent means unbounded.
fn de_opt_inf<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    let v: Option<f64> = Option::deserialize(d)?;
    Ok(v.unwrap_or(f64::INFINITY))
}

/// Aligned hourly series over the planning horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesBundle {
    pub horizon_hours: usize,
    /// Fixed at 1.0; stored explicitly so units stay auditable.
    pub dt_hours: f64,
    pub demand_mw: Vec<f64>,
    pub heat_demand_mw: Vec<f64>,
    pub wind_cf: Vec<f64>,
    pub solar_cf: Vec<f64>,
}

/// Asset lifetimes in years, used when annualising capital costs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lifetimes {
    /// Parallel to `PlanningProblem::thermal_classes`.
    pub thermal_years: Vec<f64>,
    pub wind_years: f64,
    pub solar_years: f64,
    pub storage_energy_years: f64,
    pub p2h_years: f64,
    pub h2p_years: f64,
}

impl Default for Lifetimes {
    fn default() -> Self {
        Lifetimes {
            thermal_years: Vec::new(),
            wind_years: 25.0,
            solar_years: 25.0,
            storage_energy_years: 30.0,
            p2h_years: 25.0,
            h2p_years: 15.0,
        }
    }
}

/// Complete immutable input to the planning pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanningProblem {
    pub thermal_classes: Vec<ThermalUnitClass>,
    pub wind: RenewableClass,
    pub solar: RenewableClass,
    pub storage: StorageTech,
    pub series: TimeSeriesBundle,
    /// Renewable generation-share floor ρ in [0, 1).
    pub penetration_target: f64,
    pub discount_rate: f64,
    pub lifetimes: Lifetimes,
    /// When set, annualised capital and fixed-O&M terms are scaled by
    /// `horizon/8760` in the objective, so capacity decisions on a
    /// sub-year study carry a period-consistent share of yearly cost.
    #[serde(default)]
    pub prorate_capital_to_horizon: bool,
}

impl PlanningProblem {
    /// Index of the (single) CHP class, if any.
    pub fn chp_index(&self) -> Option<usize> {
        self.thermal_classes.iter().position(|c| c.is_chp)
    }

    /// True if heat demand is nonzero anywhere in the horizon.
    pub fn has_heat_demand(&self) -> bool {
        self.series.heat_demand_mw.iter().any(|&h| h > 0.0)
    }
}

/// Annualise a capital cost with the capital-recovery factor.
///
/// Returns `capital * r(1+r)^L / ((1+r)^L - 1)`, or straight-line
/// `capital / L` at zero discount rate.
pub fn amortize(capital_per_kw: f64, lifetime_years: f64, discount_rate: f64) -> Result<f64, DomainError> {
    if !capital_per_kw.is_finite() || !lifetime_years.is_finite() || !discount_rate.is_finite() {
        return Err(DomainError::BadArgument(
            "amortize: non-finite input".into(),
        ));
    }
    if capital_per_kw < 0.0 {
        return Err(DomainError::BadArgument("amortize: capital < 0".into()));
    }
    if lifetime_years < 1.0 {
        return Err(DomainError::BadArgument("amortize: lifetime < 1".into()));
    }
    if discount_rate < 0.0 {
        return Err(DomainError::BadArgument(
            "amortize: discount rate < 0".into(),
        ));
    }
    if discount_rate == 0.0 {
        return Ok(capital_per_kw / lifetime_years);
    }
    let growth = (1.0 + discount_rate).powf(lifetime_years);
    Ok(capital_per_kw * discount_rate * growth / (growth - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn amortize_zero_rate_is_straight_line() {
        // AEC electrolyzer: 604 $/kW over 25 years.
        assert_relative_eq!(amortize(604.0, 25.0, 0.0).unwrap(), 24.16, epsilon = 1e-12);
    }

    #[test]
    fn amortize_zero_capital() {
        assert_eq!(amortize(0.0, 20.0, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn amortize_crf_reference_value() {
        // CRF(0.05, 25) = 0.05*1.05^25/(1.05^25-1). Evaluated independently
        // with mpmath at 50 digits: 604 * CRF = 42.855284208734694...
        assert_relative_eq!(
            amortize(604.0, 25.0, 0.05).unwrap(),
            42.855_284_208_734_694,
            epsilon = 1e-9
        );
    }

    #[test]
    fn amortize_rejects_bad_inputs() {
        assert!(amortize(f64::NAN, 10.0, 0.05).is_err());
        assert!(amortize(100.0, f64::INFINITY, 0.05).is_err());
        assert!(amortize(-1.0, 10.0, 0.05).is_err());
        assert!(amortize(100.0, 0.5, 0.05).is_err());
        assert!(amortize(100.0, 10.0, -0.01).is_err());
    }

    #[test]
    fn amortize_monotonicity() {
        let base = amortize(500.0, 20.0, 0.05).unwrap();
        assert!(amortize(600.0, 20.0, 0.05).unwrap() > base);
        assert!(amortize(500.0, 20.0, 0.08).unwrap() > base);
        assert!(amortize(500.0, 30.0, 0.05).unwrap() < base);
    }
}
