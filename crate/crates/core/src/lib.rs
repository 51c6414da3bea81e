//! Capacity-expansion planning for power systems with seasonal salt-cavern
//! hydrogen storage.
//!
//! The crate is organised around a single pipeline:
//!
//! 1. [`domain`] — problem data: unit classes, renewables, storage
//!    technologies, hourly series, validation, and a synthetic seasonal
//!    data generator.
//! 2. [`formulation`] — translates a [`domain::PlanningProblem`] into a
//!    [`formulation::LinearProgram`], either as the fast continuous
//!    unit-commitment planning model or as the traditional binary
//!    unit-commitment oracle.
//! 3. [`solver`] — a self-contained bounded-variable primal simplex,
//!    branch-and-bound over binaries, and MPS import/export plus an
//!    external-solver hook for horizons the dense simplex cannot reach.
//! 4. [`engine`] — scenario studies: single plans, penetration sweeps,
//!    three-way storage comparisons, and the fast-vs-oracle verification
//!    harness.
//! 5. [`cli`] — the `saltplan` command-line front end.

pub mod cli;
pub mod domain;
pub mod engine;
pub mod formulation;
pub mod solver;
pub(crate) mod util;
