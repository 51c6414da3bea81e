//! Shared fixtures for unit tests.

use super::presets;
use super::{PlanningProblem, SeriesParams, StorageKind};

/// Small single-class problem over `horizon` hours with mild seasonal
/// shape and no heat demand. Passes `validate` by construction.
pub fn tiny_problem(horizon: usize) -> PlanningProblem {
    let series = super::gen_seasonal_series(&SeriesParams::new(horizon, 50.0, 0.2, 0.2, 7)).unwrap();
    let mut p = presets::demo_problem(StorageKind::SaltCavern, series, 0.0);
    for c in &mut p.thermal_classes {
        c.min_up_hours = c.min_up_hours.min(horizon.min(4) as u32);
        c.min_down_hours = c.min_down_hours.min(horizon.min(4) as u32);
    }
    p
}
