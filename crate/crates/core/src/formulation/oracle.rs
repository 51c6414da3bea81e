//! The traditional binary unit-commitment model, used as the exactness
//! oracle for the fast continuous relaxation.
//!
//! Each class is unrolled into `J` identical units with binary
//! commit/start/stop variables; the class aggregates are defined from the
//! unit variables and every downstream constraint family is then reused
//! unchanged on the aggregates. Capacities are fixed (`J · unit_size` per
//! class): the comparison is about commitment fidelity, not expansion.

use super::lp::Sense;
use super::model::{BuiltModel, FormulationError, ModelBuilder};
use super::varmap::{Cap, CapacityMode};
use crate::domain::PlanningProblem;

/// Build the binary oracle. `units_per_class` is the same `J` for every
/// class; unit sizes come from each class's `unit_size_mw`.
pub fn build_oracle_model(p: &PlanningProblem, units_per_class: usize) -> Result<BuiltModel, FormulationError> {
    if units_per_class == 0 {
        return Err(FormulationError::Unsupported("oracle needs at least one unit per class".into()));
    }
    let mut mb = ModelBuilder::new(p, CapacityMode::Fixed, "oracle_uc")?;

    // fixed fleet: J · unit_size per class, overriding existing_capacity
    for (i, c) in p.thermal_classes.iter().enumerate() {
        mb.thermal_caps[i] = Cap::Const(units_per_class as f64 * c.unit_size_mw);
        if c.initial_online_mw != 0.0 || c.initial_output_mw != 0.0 {
            return Err(FormulationError::Unsupported(
                "oracle model assumes a cold start (zero initial online capacity and output)".into(),
            ));
        }
    }

    mb.declare_hourly_vars()?;
    declare_unit_vars(&mut mb, units_per_class)?;
    add_unit_constraints(&mut mb, units_per_class)?;

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

fn declare_unit_vars(mb: &mut ModelBuilder, units: usize) -> Result<(), FormulationError> {
    let t_len = mb.horizon();
    let p = mb.p;
    for (i, c) in p.thermal_classes.iter().enumerate() {
        mb.vm.units_per_class[i] = units;
        let id = &c.id;
        for j in 0..units {
            let mut commit = Vec::with_capacity(t_len);
            let mut start = Vec::with_capacity(t_len);
            let mut stop = Vec::with_capacity(t_len);
            let mut output = Vec::with_capacity(t_len);
            for t in 0..t_len {
                commit.push(mb.b.add_var(format!("var.commit.{id}.u{j:02}.t{t:04}"), 0.0, 1.0, true)?);
            }
            for t in 0..t_len {
                start.push(mb.b.add_var(format!("var.start.{id}.u{j:02}.t{t:04}"), 0.0, 1.0, true)?);
            }
            for t in 0..t_len {
                stop.push(mb.b.add_var(format!("var.stop.{id}.u{j:02}.t{t:04}"), 0.0, 1.0, true)?);
            }
            for t in 0..t_len {
                output.push(mb.b.add_var(format!("var.unit_out.{id}.u{j:02}.t{t:04}"), 0.0, f64::INFINITY, false)?);
            }
            mb.vm.unit_commit[i].push(commit);
            mb.vm.unit_start[i].push(start);
            mb.vm.unit_stop[i].push(stop);
            mb.vm.unit_output[i].push(output);
        }
    }
    Ok(())
}

fn add_unit_constraints(mb: &mut ModelBuilder, units: usize) -> Result<(), FormulationError> {
    let t_len = mb.horizon();
    let p = mb.p;
    for (i, c) in p.thermal_classes.iter().enumerate() {
        let id = c.id.clone();
        let pmax = c.unit_size_mw;
        let (lo, hi) = (c.min_output_ratio, c.max_output_ratio);
        for j in 0..units {
            for t in 0..t_len {
                // eq1: commit(t) - commit(t-1) = start(t) - stop(t), cold start
                let mut terms = vec![
                    (mb.vm.unit_commit[i][j][t], 1.0),
                    (mb.vm.unit_start[i][j][t], -1.0),
                    (mb.vm.unit_stop[i][j][t], 1.0),
                ];
                if t > 0 {
                    terms.push((mb.vm.unit_commit[i][j][t - 1], -1.0));
                }
                mb.b.add_constraint(format!("eq1.unit_link.{id}.u{j:02}.t{t:04}"), &terms, Sense::Eq, 0.0)?;

                // eq2 with the output-range reading: δ_·pmax·x ≤ p ≤ δ̄·pmax·x
                mb.b.add_constraint(
                    format!("eq2.unit_min.{id}.u{j:02}.t{t:04}"),
                    &[(mb.vm.unit_commit[i][j][t], lo * pmax), (mb.vm.unit_output[i][j][t], -1.0)],
                    Sense::Le,
                    0.0,
                )?;
                mb.b.add_constraint(
                    format!("eq2.unit_max.{id}.u{j:02}.t{t:04}"),
                    &[(mb.vm.unit_output[i][j][t], 1.0), (mb.vm.unit_commit[i][j][t], -hi * pmax)],
                    Sense::Le,
                    0.0,
                )?;
            }
        }

        // eq3-eq5: class aggregates defined from the unit fleet, plus the
        // aggregate output identity the downstream families dispatch on
        for t in 0..t_len {
            for (fam, agg, per_unit) in [
                ("eq3.agg_online", mb.vm.online_cap[i][t], &mb.vm.unit_commit[i]),
                ("eq4.agg_start", mb.vm.startup[i][t], &mb.vm.unit_start[i]),
                ("eq5.agg_stop", mb.vm.shutdown[i][t], &mb.vm.unit_stop[i]),
            ] {
                let mut terms = vec![(agg, 1.0)];
                for j in 0..units {
                    terms.push((per_unit[j][t], -pmax));
                }
                mb.b.add_constraint(format!("{fam}.{id}.t{t:04}"), &terms, Sense::Eq, 0.0)?;
            }
            let mut terms = vec![(mb.vm.thermal_output[i][t], 1.0)];
            for j in 0..units {
                terms.push((mb.vm.unit_output[i][j][t], -1.0));
            }
            mb.b.add_constraint(format!("oracle.agg_output.{id}.t{t:04}"), &terms, Sense::Eq, 0.0)?;
        }
    }
    Ok(())
}
