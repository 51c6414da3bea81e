//! The JSON problem-config format.
//!
//! A config file carries hand-edited parameters; bulk hourly data lives
//! in the series CSV. Top-level keys: `schema_version`, `thermal_classes`,
//! `wind`, `solar`, `storage`, `policy`. The `storage` object holds one
//! entry per scenario key (`bau`, `hss`, `schss`); `load_problem` picks
//! one and annualises every capital cost with the policy discount rate.

use super::{
    amortize, DomainError, Lifetimes, PlanningProblem, RenewableClass, RenewableKind, StorageKind,
    StorageTech, ThermalUnitClass, TimeSeriesBundle,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThermalClassConfig {
    pub id: String,
    pub existing_capacity_mw: f64,
    pub capital_cost_per_kw: f64,
    pub om_cost_frac: f64,
    pub fuel_cost_per_mwh: f64,
    pub startup_cost_per_mw: f64,
    pub max_output_ratio: f64,
    pub min_output_ratio: f64,
    pub ramp_up_ratio: f64,
    pub ramp_down_ratio: f64,
    pub startup_ramp_ratio: f64,
    pub shutdown_ramp_ratio: f64,
    pub min_up_hours: u32,
    pub min_down_hours: u32,
    pub emission_factor_t_per_mwh: f64,
    #[serde(default)]
    pub is_chp: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub thermoelectric_ratio: Option<f64>,
    pub unit_size_mw: f64,
    pub lifetime_years: f64,
    #[serde(default)]
    pub initial_online_mw: f64,
    #[serde(default)]
    pub initial_output_mw: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenewableConfig {
    pub existing_capacity_mw: f64,
    pub capital_cost_per_kw: f64,
    pub om_cost_per_kw_yr: f64,
    pub lifetime_years: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StorageConfig {
    pub kind: StorageKind,
    pub energy_capital_per_kwh: f64,
    pub energy_lifetime_years: f64,
    pub p2h_capital_per_kw: f64,
    pub p2h_om_per_kw_yr: f64,
    pub p2h_lifetime_years: f64,
    pub h2p_capital_per_kw: f64,
    pub h2p_om_per_kw_yr: f64,
    pub h2p_lifetime_years: f64,
    pub eta_p2h: f64,
    pub eta_h2p: f64,
    pub eta_in: f64,
    pub eta_out: f64,
    pub leak_rate_per_hour: f64,
    pub max_flow_in_mw: f64,
    pub max_flow_out_mw: f64,
    /// `null`/absent = unbounded.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub energy_cap_limit_mwh: Option<f64>,
    pub initial_soc_frac: f64,
    #[serde(default)]
    pub p2h_min_load_frac: f64,
    #[serde(default)]
    pub existing_energy_mwh: f64,
    #[serde(default)]
    pub existing_p2h_mw: f64,
    #[serde(default)]
    pub existing_h2p_mw: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub penetration_target: f64,
    pub discount_rate: f64,
    #[serde(default)]
    pub prorate_capital_to_horizon: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemConfig {
    pub schema_version: u32,
    pub thermal_classes: Vec<ThermalClassConfig>,
    pub wind: RenewableConfig,
    pub solar: RenewableConfig,
    /// Scenario key (`bau` / `hss` / `schss`) to storage parameters.
    pub storage: BTreeMap<String, StorageConfig>,
    pub policy: PolicyConfig,
}

impl ProblemConfig {
    pub fn from_path(path: &Path) -> Result<Self, DomainError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ProblemConfig =
            serde_json::from_str(&text).map_err(|e| DomainError::Parse(format!("{}: {e}", path.display())))?;
        if cfg.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(DomainError::Parse(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Default three-class / three-scenario config mirroring the presets.
    pub fn default_config() -> Self {
        use super::presets;
        let to_cfg = |c: ThermalUnitClass, life: f64| ThermalClassConfig {
            id: c.id,
            existing_capacity_mw: c.existing_capacity_mw,
            capital_cost_per_kw: c.capital_cost_per_kw,
            om_cost_frac: c.om_cost_frac,
            fuel_cost_per_mwh: c.fuel_cost_per_mwh,
            startup_cost_per_mw: c.startup_cost_per_mw,
            max_output_ratio: c.max_output_ratio,
            min_output_ratio: c.min_output_ratio,
            ramp_up_ratio: c.ramp_up_ratio,
            ramp_down_ratio: c.ramp_down_ratio,
            startup_ramp_ratio: c.startup_ramp_ratio,
            shutdown_ramp_ratio: c.shutdown_ramp_ratio,
            min_up_hours: c.min_up_hours,
            min_down_hours: c.min_down_hours,
            emission_factor_t_per_mwh: c.emission_factor_t_per_mwh,
            is_chp: c.is_chp,
            thermoelectric_ratio: c.thermoelectric_ratio,
            unit_size_mw: c.unit_size_mw,
            lifetime_years: life,
            initial_online_mw: c.initial_online_mw,
            initial_output_mw: c.initial_output_mw,
        };
        let storage_cfg = |kind: StorageKind,
                           energy_capital_per_kwh: f64,
                           energy_life: f64,
                           p2h_capital: f64,
                           p2h_life: f64,
                           h2p_capital: f64,
                           h2p_life: f64| {
            let s = presets::storage_preset(kind);
            StorageConfig {
                kind,
                energy_capital_per_kwh,
                energy_lifetime_years: energy_life,
                p2h_capital_per_kw: p2h_capital,
                p2h_om_per_kw_yr: s.p2h_om_per_kw_yr,
                p2h_lifetime_years: p2h_life,
                h2p_capital_per_kw: h2p_capital,
                h2p_om_per_kw_yr: s.h2p_om_per_kw_yr,
                h2p_lifetime_years: h2p_life,
                eta_p2h: s.eta_p2h,
                eta_h2p: s.eta_h2p,
                eta_in: s.eta_in,
                eta_out: s.eta_out,
                leak_rate_per_hour: s.leak_rate_per_hour,
                max_flow_in_mw: s.max_flow_in_mw,
                max_flow_out_mw: s.max_flow_out_mw,
                energy_cap_limit_mwh: None,
                initial_soc_frac: s.initial_soc_frac,
                p2h_min_load_frac: s.p2h_min_load_frac,
                existing_energy_mwh: 0.0,
                existing_p2h_mw: 0.0,
                existing_h2p_mw: 0.0,
            }
        };
        let mut storage = BTreeMap::new();
        // Capital figures consistent with the preset annualised values.
        storage.insert("bau".into(), storage_cfg(StorageKind::Electrochemical, 300.0, 15.0, 150.0, 15.0, 150.0, 15.0));
        storage.insert("hss".into(), storage_cfg(StorageKind::Tank, 15.0, 20.0, 604.0, 25.0, 1200.0, 15.0));
        storage.insert("schss".into(), storage_cfg(StorageKind::SaltCavern, 2.3, 30.0, 604.0, 25.0, 1200.0, 15.0));

        ProblemConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            thermal_classes: vec![to_cfg(presets::thermal_coal(), 30.0)],
            wind: RenewableConfig {
                existing_capacity_mw: 0.0,
                capital_cost_per_kw: 1100.0,
                om_cost_per_kw_yr: 28.0,
                lifetime_years: 25.0,
            },
            solar: RenewableConfig {
                existing_capacity_mw: 0.0,
                capital_cost_per_kw: 700.0,
                om_cost_per_kw_yr: 12.0,
                lifetime_years: 25.0,
            },
            storage,
            policy: PolicyConfig {
                penetration_target: 0.5,
                discount_rate: 0.05,
                prorate_capital_to_horizon: true,
            },
        }
    }
}

/// Assemble a `PlanningProblem` from a parsed config, a series bundle,
/// and the chosen storage scenario key. `penetration_override` replaces
/// the policy value when given.
pub fn load_problem(
    cfg: &ProblemConfig,
    series: TimeSeriesBundle,
    storage_key: &str,
    penetration_override: Option<f64>,
) -> Result<PlanningProblem, DomainError> {
    let rate = cfg.policy.discount_rate;
    let s = cfg
        .storage
        .get(storage_key)
        .ok_or_else(|| DomainError::BadArgument(format!(
            "storage scenario `{storage_key}` not in config (have: {})",
            cfg.storage.keys().cloned().collect::<Vec<_>>().join(", ")
        )))?;

    let mut thermal = Vec::with_capacity(cfg.thermal_classes.len());
    let mut thermal_years = Vec::with_capacity(cfg.thermal_classes.len());
    for c in &cfg.thermal_classes {
        thermal.push(ThermalUnitClass {
            id: c.id.clone(),
            existing_capacity_mw: c.existing_capacity_mw,
            capital_cost_per_kw: c.capital_cost_per_kw,
            om_cost_frac: c.om_cost_frac,
            fuel_cost_per_mwh: c.fuel_cost_per_mwh,
            startup_cost_per_mw: c.startup_cost_per_mw,
            max_output_ratio: c.max_output_ratio,
            min_output_ratio: c.min_output_ratio,
            ramp_up_ratio: c.ramp_up_ratio,
            ramp_down_ratio: c.ramp_down_ratio,
            startup_ramp_ratio: c.startup_ramp_ratio,
            shutdown_ramp_ratio: c.shutdown_ramp_ratio,
            min_up_hours: c.min_up_hours,
            min_down_hours: c.min_down_hours,
            emission_factor_t_per_mwh: c.emission_factor_t_per_mwh,
            is_chp: c.is_chp,
            thermoelectric_ratio: c.thermoelectric_ratio,
            unit_size_mw: c.unit_size_mw,
            amortized_capital_per_kw_yr: amortize(c.capital_cost_per_kw, c.lifetime_years, rate)?,
            initial_online_mw: c.initial_online_mw,
            initial_output_mw: c.initial_output_mw,
        });
        thermal_years.push(c.lifetime_years);
    }

    let renewable = |kind: RenewableKind, r: &RenewableConfig| -> Result<RenewableClass, DomainError> {
        Ok(RenewableClass {
            kind,
            existing_capacity_mw: r.existing_capacity_mw,
            capital_cost_per_kw: r.capital_cost_per_kw,
            om_cost_per_kw_yr: r.om_cost_per_kw_yr,
            amortized_capital_per_kw_yr: amortize(r.capital_cost_per_kw, r.lifetime_years, rate)?,
        })
    };

    let storage = StorageTech {
        kind: s.kind,
        energy_capital_per_kwh_yr: amortize(s.energy_capital_per_kwh, s.energy_lifetime_years, rate)?,
        p2h_capital_per_kw_yr: amortize(s.p2h_capital_per_kw, s.p2h_lifetime_years, rate)?,
        p2h_om_per_kw_yr: s.p2h_om_per_kw_yr,
        h2p_capital_per_kw_yr: amortize(s.h2p_capital_per_kw, s.h2p_lifetime_years, rate)?,
        h2p_om_per_kw_yr: s.h2p_om_per_kw_yr,
        eta_p2h: s.eta_p2h,
        eta_h2p: s.eta_h2p,
        eta_in: s.eta_in,
        eta_out: s.eta_out,
        leak_rate_per_hour: s.leak_rate_per_hour,
        max_flow_in_mw: s.max_flow_in_mw,
        max_flow_out_mw: s.max_flow_out_mw,
        energy_cap_limit_mwh: s.energy_cap_limit_mwh.unwrap_or(f64::INFINITY),
        initial_soc_frac: s.initial_soc_frac,
        p2h_min_load_frac: s.p2h_min_load_frac,
        existing_energy_mwh: s.existing_energy_mwh,
        existing_p2h_mw: s.existing_p2h_mw,
        existing_h2p_mw: s.existing_h2p_mw,
    };

    Ok(PlanningProblem {
        thermal_classes: thermal,
        wind: renewable(RenewableKind::Wind, &cfg.wind)?,
        solar: renewable(RenewableKind::Solar, &cfg.solar)?,
        storage,
        series,
        penetration_target: penetration_override.unwrap_or(cfg.policy.penetration_target),
        discount_rate: rate,
        lifetimes: Lifetimes {
            thermal_years,
            wind_years: cfg.wind.lifetime_years,
            solar_years: cfg.solar.lifetime_years,
            storage_energy_years: s.energy_lifetime_years,
            p2h_years: s.p2h_lifetime_years,
            h2p_years: s.h2p_lifetime_years,
        },
        prorate_capital_to_horizon: cfg.policy.prorate_capital_to_horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{gen_seasonal_series, validate, SeriesParams};
    use super::*;

    #[test]
    fn default_config_loads_every_scenario() {
        let cfg = ProblemConfig::default_config();
        let series = gen_seasonal_series(&SeriesParams::new(48, 100.0, 0.3, 0.3, 1)).unwrap();
        for key in ["bau", "hss", "schss"] {
            let p = load_problem(&cfg, series.clone(), key, Some(0.4)).unwrap();
            assert_eq!(validate(&p), vec![], "scenario {key}");
            assert_eq!(p.penetration_target, 0.4);
        }
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = ProblemConfig::default_config();
        let text = cfg.to_json_pretty();
        let back: ProblemConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json_pretty(), text);
    }

    #[test]
    fn unknown_storage_key_is_an_error() {
        let cfg = ProblemConfig::default_config();
        let series = gen_seasonal_series(&SeriesParams::new(24, 100.0, 0.3, 0.3, 1)).unwrap();
        assert!(load_problem(&cfg, series, "nope", None).is_err());
    }

    #[test]
    fn schema_version_is_checked() {
        let mut cfg = ProblemConfig::default_config();
        cfg.schema_version = 99;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        std::fs::write(&path, cfg.to_json_pretty()).unwrap();
        assert!(ProblemConfig::from_path(&path).is_err());
    }
}
