//! Problem validation. Violations are data, not errors: an empty list is
//! the precondition every model builder relies on.

use super::{PlanningProblem, RenewableKind, StorageKind};

/// One broken invariant: which field, which rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn push(out: &mut Vec<Violation>, field: impl Into<String>, rule: impl Into<String>) {
    out.push(Violation {
        field: field.into(),
        rule: rule.into(),
    });
}

fn check_finite_nonneg(out: &mut Vec<Violation>, field: String, v: f64) {
    if !v.is_finite() && !(v.is_infinite() && v > 0.0) {
        push(out, field, "must be finite");
    } else if v < 0.0 {
        push(out, field, "must be >= 0");
    }
}

/// Check every type invariant and cross-field rule. Returns an empty list
/// iff the problem is accepted by every downstream builder.
pub fn validate(p: &PlanningProblem) -> Vec<Violation> {
    let mut out = Vec::new();
    let t = p.series.horizon_hours;

    if p.thermal_classes.is_empty() {
        push(&mut out, "thermal_classes", "at least one class required");
    }
    if t == 0 {
        push(&mut out, "series.horizon_hours", "horizon must be >= 1");
    }
    if p.series.dt_hours != 1.0 {
        push(&mut out, "series.dt_hours", "time step is fixed at 1.0 hour");
    }

    // Series alignment and ranges.
    let series = [
        ("series.demand_mw", &p.series.demand_mw),
        ("series.heat_demand_mw", &p.series.heat_demand_mw),
        ("series.wind_cf", &p.series.wind_cf),
        ("series.solar_cf", &p.series.solar_cf),
    ];
    for (name, s) in series {
        if s.len() != t {
            push(&mut out, name, format!("length {} != horizon {}", s.len(), t));
        }
    }
    for (i, &d) in p.series.demand_mw.iter().enumerate() {
        if !(d.is_finite() && d >= 0.0) {
            push(&mut out, format!("series.demand_mw[{i}]"), "must be finite and >= 0");
        }
    }
    for (i, &h) in p.series.heat_demand_mw.iter().enumerate() {
        if !(h.is_finite() && h >= 0.0) {
            push(&mut out, format!("series.heat_demand_mw[{i}]"), "must be finite and >= 0");
        }
    }
    for (name, s) in [("series.wind_cf", &p.series.wind_cf), ("series.solar_cf", &p.series.solar_cf)] {
        for (i, &cf) in s.iter().enumerate() {
            if !(cf.is_finite() && (0.0..=1.0).contains(&cf)) {
                push(&mut out, format!("{name}[{i}]"), "capacity factor must be in [0, 1]");
            }
        }
    }

    // Thermal classes.
    let mut chp_count = 0usize;
    let mut seen_ids = std::collections::BTreeSet::new();
    for (i, c) in p.thermal_classes.iter().enumerate() {
        let f = |name: &str| format!("thermal_classes[{i}].{name}");
        if !seen_ids.insert(c.id.clone()) {
            push(&mut out, f("id"), "class ids must be unique");
        }
        if c.id.is_empty() || c.id.contains(char::is_whitespace) || c.id.contains('.') {
            push(&mut out, f("id"), "id must be non-empty, without whitespace or '.'");
        }
        if !(0.0 <= c.min_output_ratio && c.min_output_ratio <= c.max_output_ratio && c.max_output_ratio <= 1.0) {
            push(&mut out, f("min_output_ratio"), "need 0 <= min <= max <= 1");
        }
        if !(c.min_output_ratio <= c.startup_ramp_ratio && c.startup_ramp_ratio <= 1.0) {
            push(&mut out, f("startup_ramp_ratio"), "need min_output_ratio <= startup_ramp <= 1");
        }
        if !(c.min_output_ratio <= c.shutdown_ramp_ratio && c.shutdown_ramp_ratio <= 1.0) {
            push(&mut out, f("shutdown_ramp_ratio"), "need min_output_ratio <= shutdown_ramp <= 1");
        }
        if c.min_up_hours < 1 {
            push(&mut out, f("min_up_hours"), "must be >= 1");
        }
        if c.min_down_hours < 1 {
            push(&mut out, f("min_down_hours"), "must be >= 1");
        }
        if t > 0 && c.min_up_hours as usize > t {
            push(&mut out, f("min_up_hours"), format!("exceeds horizon {t}"));
        }
        if t > 0 && c.min_down_hours as usize > t {
            push(&mut out, f("min_down_hours"), format!("exceeds horizon {t}"));
        }
        if !(c.unit_size_mw > 0.0 && c.unit_size_mw.is_finite()) {
            push(&mut out, f("unit_size_mw"), "must be > 0");
        }
        if c.is_chp {
            chp_count += 1;
            match c.thermoelectric_ratio {
                Some(te) if te > 0.0 && te.is_finite() => {}
                _ => push(&mut out, f("thermoelectric_ratio"), "CHP class needs a positive thermoelectric ratio"),
            }
        } else if c.thermoelectric_ratio.is_some() {
            push(&mut out, f("thermoelectric_ratio"), "only CHP classes carry a thermoelectric ratio");
        }
        for (name, v) in [
            ("existing_capacity_mw", c.existing_capacity_mw),
            ("capital_cost_per_kw", c.capital_cost_per_kw),
            ("om_cost_frac", c.om_cost_frac),
            ("fuel_cost_per_mwh", c.fuel_cost_per_mwh),
            ("startup_cost_per_mw", c.startup_cost_per_mw),
            ("ramp_up_ratio", c.ramp_up_ratio),
            ("ramp_down_ratio", c.ramp_down_ratio),
            ("emission_factor_t_per_mwh", c.emission_factor_t_per_mwh),
            ("amortized_capital_per_kw_yr", c.amortized_capital_per_kw_yr),
            ("initial_online_mw", c.initial_online_mw),
            ("initial_output_mw", c.initial_output_mw),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                push(&mut out, f(name), "must be finite and >= 0");
            }
        }
        if c.initial_output_mw > c.initial_online_mw {
            push(&mut out, f("initial_output_mw"), "cannot exceed initial_online_mw");
        }
    }
    if chp_count > 1 {
        push(&mut out, "thermal_classes", "at most one CHP class per problem");
    }
    if chp_count == 0 && p.has_heat_demand() {
        push(&mut out, "series.heat_demand_mw", "heat demand is unservable without a CHP class");
    }

    // Renewables: one class per kind, tagged correctly.
    if p.wind.kind != RenewableKind::Wind {
        push(&mut out, "wind.kind", "must be wind");
    }
    if p.solar.kind != RenewableKind::Solar {
        push(&mut out, "solar.kind", "must be solar");
    }
    for (prefix, r) in [("wind", &p.wind), ("solar", &p.solar)] {
        for (name, v) in [
            ("existing_capacity_mw", r.existing_capacity_mw),
            ("capital_cost_per_kw", r.capital_cost_per_kw),
            ("om_cost_per_kw_yr", r.om_cost_per_kw_yr),
            ("amortized_capital_per_kw_yr", r.amortized_capital_per_kw_yr),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                push(&mut out, format!("{prefix}.{name}"), "must be finite and >= 0");
            }
        }
    }

    // Storage.
    let s = &p.storage;
    for (name, v) in [
        ("storage.eta_p2h", s.eta_p2h),
        ("storage.eta_h2p", s.eta_h2p),
        ("storage.eta_in", s.eta_in),
        ("storage.eta_out", s.eta_out),
    ] {
        if !(v.is_finite() && v > 0.0 && v <= 1.0) {
            push(&mut out, name, "efficiency must be in (0, 1]");
        }
    }
    if !(s.leak_rate_per_hour.is_finite() && (0.0..1.0).contains(&s.leak_rate_per_hour)) {
        push(&mut out, "storage.leak_rate_per_hour", "must be in [0, 1)");
    }
    if !(s.initial_soc_frac.is_finite() && (0.0..=1.0).contains(&s.initial_soc_frac)) {
        push(&mut out, "storage.initial_soc_frac", "must be in [0, 1]");
    }
    if !(s.p2h_min_load_frac.is_finite() && (0.0..=1.0).contains(&s.p2h_min_load_frac)) {
        push(&mut out, "storage.p2h_min_load_frac", "must be in [0, 1]");
    }
    check_finite_nonneg(&mut out, "storage.max_flow_in_mw".into(), s.max_flow_in_mw);
    check_finite_nonneg(&mut out, "storage.max_flow_out_mw".into(), s.max_flow_out_mw);
    check_finite_nonneg(&mut out, "storage.energy_cap_limit_mwh".into(), s.energy_cap_limit_mwh);
    for (name, v) in [
        ("storage.energy_capital_per_kwh_yr", s.energy_capital_per_kwh_yr),
        ("storage.p2h_capital_per_kw_yr", s.p2h_capital_per_kw_yr),
        ("storage.p2h_om_per_kw_yr", s.p2h_om_per_kw_yr),
        ("storage.h2p_capital_per_kw_yr", s.h2p_capital_per_kw_yr),
        ("storage.h2p_om_per_kw_yr", s.h2p_om_per_kw_yr),
        ("storage.existing_energy_mwh", s.existing_energy_mwh),
        ("storage.existing_p2h_mw", s.existing_p2h_mw),
        ("storage.existing_h2p_mw", s.existing_h2p_mw),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            push(&mut out, name, "must be finite and >= 0");
        }
    }
    if s.kind == StorageKind::Electrochemical && (s.eta_p2h != 1.0 || s.eta_h2p != 1.0) {
        push(
            &mut out,
            "storage.eta_p2h",
            "electrochemical storage models conversion losses via eta_in/eta_out; eta_p2h and eta_h2p must be 1",
        );
    }

    // Policy.
    if !(p.penetration_target.is_finite() && (0.0..1.0).contains(&p.penetration_target)) {
        push(&mut out, "penetration_target", "must be in [0, 1)");
    }
    if !(p.discount_rate.is_finite() && p.discount_rate >= 0.0) {
        push(&mut out, "discount_rate", "must be finite and >= 0");
    }

    out
}

#[cfg(test)]
mod tests {
    use super::super::testutil::tiny_problem;
    use super::*;

    #[test]
    fn well_formed_problem_has_no_violations() {
        let p = tiny_problem(24);
        assert_eq!(validate(&p), Vec::new());
    }

    #[test]
    fn out_of_range_capacity_factor_is_flagged() {
        let mut p = tiny_problem(24);
        p.series.wind_cf[3] = 1.3;
        let v = validate(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "series.wind_cf[3]");
    }

    #[test]
    fn heat_without_chp_is_unservable() {
        let mut p = tiny_problem(24);
        p.series.heat_demand_mw[0] = 5.0;
        let v = validate(&p);
        assert!(v.iter().any(|v| v.field == "series.heat_demand_mw"), "{v:?}");
    }

    #[test]
    fn min_up_longer_than_horizon_is_flagged() {
        let mut p = tiny_problem(4);
        p.thermal_classes[0].min_up_hours = 9;
        let v = validate(&p);
        assert!(v.iter().any(|v| v.field.ends_with("min_up_hours")));
    }

    #[test]
    fn misaligned_series_is_flagged() {
        let mut p = tiny_problem(24);
        p.series.solar_cf.pop();
        assert!(!validate(&p).is_empty());
    }

    #[test]
    fn electrochemical_requires_unit_conversion() {
        let mut p = tiny_problem(24);
        p.storage.kind = StorageKind::Electrochemical;
        p.storage.eta_p2h = 0.7;
        assert!(validate(&p).iter().any(|v| v.field == "storage.eta_p2h"));
    }
}
