//! Ready-made parameter sets for desk-scale studies and tests.
//!
//! Thermal capital/O&M/start-up figures follow published 2050-projection
//! tables for coal, coal-CHP, and gas units; electrolyzer figures follow
//! the alkaline-electrolyser (AEC) 2030 projection. Operating ratios,
//! fuel prices, and emission factors are synthetic desk values — the
//! point of the presets is a coherent, feasible instance, not a forecast.

use super::{
    amortize, Lifetimes, PlanningProblem, RenewableClass, RenewableKind, SeriesParams,
    StorageKind, StorageTech, ThermalUnitClass, TimeSeriesBundle,
};

pub fn thermal_coal() -> ThermalUnitClass {
    ThermalUnitClass {
        id: "coal".into(),
        existing_capacity_mw: 0.0,
        capital_cost_per_kw: 621.0,
        om_cost_frac: 0.021,
        fuel_cost_per_mwh: 28.0,
        startup_cost_per_mw: 147.0,
        max_output_ratio: 1.0,
        min_output_ratio: 0.45,
        ramp_up_ratio: 0.35,
        ramp_down_ratio: 0.35,
        startup_ramp_ratio: 0.5,
        shutdown_ramp_ratio: 0.5,
        min_up_hours: 8,
        min_down_hours: 8,
        emission_factor_t_per_mwh: 0.90,
        is_chp: false,
        thermoelectric_ratio: None,
        unit_size_mw: 100.0,
        amortized_capital_per_kw_yr: amortize(621.0, 30.0, 0.05).unwrap(),
        initial_online_mw: 0.0,
        initial_output_mw: 0.0,
    }
}

pub fn thermal_chp() -> ThermalUnitClass {
    ThermalUnitClass {
        id: "chp".into(),
        is_chp: true,
        thermoelectric_ratio: Some(0.85),
        min_output_ratio: 0.5,
        ramp_up_ratio: 0.3,
        ramp_down_ratio: 0.3,
        emission_factor_t_per_mwh: 0.95,
        fuel_cost_per_mwh: 30.0,
        unit_size_mw: 50.0,
        ..thermal_coal()
    }
}

pub fn thermal_gas() -> ThermalUnitClass {
    ThermalUnitClass {
        id: "gas".into(),
        capital_cost_per_kw: 524.0,
        om_cost_frac: 0.026,
        fuel_cost_per_mwh: 65.0,
        startup_cost_per_mw: 88.0,
        min_output_ratio: 0.25,
        ramp_up_ratio: 0.8,
        ramp_down_ratio: 0.8,
        startup_ramp_ratio: 0.9,
        shutdown_ramp_ratio: 0.9,
        min_up_hours: 1,
        min_down_hours: 1,
        emission_factor_t_per_mwh: 0.42,
        unit_size_mw: 50.0,
        amortized_capital_per_kw_yr: amortize(524.0, 25.0, 0.05).unwrap(),
        ..thermal_coal()
    }
}

pub fn wind_default() -> RenewableClass {
    RenewableClass {
        kind: RenewableKind::Wind,
        existing_capacity_mw: 0.0,
        capital_cost_per_kw: 1100.0,
        om_cost_per_kw_yr: 28.0,
        amortized_capital_per_kw_yr: amortize(1100.0, 25.0, 0.05).unwrap(),
    }
}

pub fn solar_default() -> RenewableClass {
    RenewableClass {
        kind: RenewableKind::Solar,
        existing_capacity_mw: 0.0,
        capital_cost_per_kw: 700.0,
        om_cost_per_kw_yr: 12.0,
        amortized_capital_per_kw_yr: amortize(700.0, 25.0, 0.05).unwrap(),
    }
}

/// Storage parameter set for one scenario family: BAU batteries, HSS
/// surface tanks, or SCHSS salt caverns. The energy-capital ordering
/// (cavern < tank < battery) and the tank's tight injection/extraction
/// caps drive the scenario comparisons.
pub fn storage_preset(kind: StorageKind) -> StorageTech {
    let aec_p2h = amortize(604.0, 25.0, 0.05).unwrap();
    let fuel_cell_h2p = amortize(1200.0, 15.0, 0.05).unwrap();
    match kind {
        StorageKind::SaltCavern => StorageTech {
            kind,
            // caverns: cheap bulk energy, no meaningful flow limit
            energy_capital_per_kwh_yr: 0.15,
            p2h_capital_per_kw_yr: aec_p2h,
            p2h_om_per_kw_yr: 30.0,
            h2p_capital_per_kw_yr: fuel_cell_h2p,
            h2p_om_per_kw_yr: 20.0,
            eta_p2h: 0.70,
            eta_h2p: 0.60,
            eta_in: 0.98,
            eta_out: 0.98,
            leak_rate_per_hour: 1e-5,
            max_flow_in_mw: 1e6,
            max_flow_out_mw: 1e6,
            energy_cap_limit_mwh: f64::INFINITY,
            initial_soc_frac: 0.2,
            p2h_min_load_frac: 0.2,
            existing_energy_mwh: 0.0,
            existing_p2h_mw: 0.0,
            existing_h2p_mw: 0.0,
        },
        StorageKind::Tank => StorageTech {
            kind,
            // $15/kWh vessels over 20 years; injection/extraction flow
            // limited by the tank farm
            energy_capital_per_kwh_yr: amortize(15.0, 20.0, 0.05).unwrap(),
            max_flow_in_mw: 15.0,
            max_flow_out_mw: 15.0,
            eta_in: 0.95,
            eta_out: 0.95,
            leak_rate_per_hour: 2e-4,
            ..storage_preset(StorageKind::SaltCavern)
        },
        StorageKind::Electrochemical => StorageTech {
            kind,
            // battery cells: costly energy, efficient round trip
            energy_capital_per_kwh_yr: amortize(300.0, 15.0, 0.05).unwrap(),
            p2h_capital_per_kw_yr: amortize(150.0, 15.0, 0.05).unwrap(),
            p2h_om_per_kw_yr: 2.0,
            h2p_capital_per_kw_yr: amortize(150.0, 15.0, 0.05).unwrap(),
            h2p_om_per_kw_yr: 2.0,
            eta_p2h: 1.0,
            eta_h2p: 1.0,
            eta_in: 0.95,
            eta_out: 0.95,
            leak_rate_per_hour: 1e-4,
            max_flow_in_mw: 1e6,
            max_flow_out_mw: 1e6,
            energy_cap_limit_mwh: f64::INFINITY,
            initial_soc_frac: 0.2,
            p2h_min_load_frac: 0.0,
            existing_energy_mwh: 0.0,
            existing_p2h_mw: 0.0,
            existing_h2p_mw: 0.0,
        },
    }
}

/// Assemble a complete desk-scale problem: one coal class sized to carry
/// the base load alone, greenfield renewables, the requested storage
/// preset, and a generated seasonal series. Annualised costs are prorated
/// to the horizon so sub-year studies face year-consistent economics.
pub fn demo_problem(
    storage_kind: StorageKind,
    series: TimeSeriesBundle,
    penetration_target: f64,
) -> PlanningProblem {
    let peak = series.demand_mw.iter().cloned().fold(0.0, f64::max);
    let existing = (1.25 * peak / 10.0).ceil() * 10.0;
    let coal = ThermalUnitClass {
        existing_capacity_mw: existing,
        initial_online_mw: existing,
        initial_output_mw: series.demand_mw[0].min(existing),
        ..thermal_coal()
    };
    PlanningProblem {
        lifetimes: Lifetimes {
            thermal_years: vec![30.0],
            ..Lifetimes::default()
        },
        thermal_classes: vec![coal],
        wind: wind_default(),
        solar: solar_default(),
        storage: storage_preset(storage_kind),
        series,
        penetration_target,
        discount_rate: 0.05,
        prorate_capital_to_horizon: true,
    }
}

/// Convenience wrapper: `demo_problem` on a freshly generated series.
pub fn demo_problem_seeded(
    storage_kind: StorageKind,
    horizon_hours: usize,
    penetration_target: f64,
    seed: u64,
) -> PlanningProblem {
    let series = super::gen_seasonal_series(&SeriesParams::new(horizon_hours, 100.0, 0.35, 0.35, seed))
        .expect("valid series parameters");
    demo_problem(storage_kind, series, penetration_target)
}
