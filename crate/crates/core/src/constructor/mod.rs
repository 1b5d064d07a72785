//! Orbit forcing: solving for the coefficients `c_i(j,k)` of
//! `phi_i = sum_{j <= k} c_i(j,k) x_j x_k` so that `[0, ..., 0, 1]` runs
//! through a prescribed list of points and returns.
//!
//! While the orbit points are concrete, each image coordinate is affine in
//! the coefficients, so every step is a single linear solve per coordinate.

pub mod executor;
pub mod expr;
pub mod params;
pub mod schedule;

pub use executor::{
    construct, run_schedule, solve_step, Construction, ConstructOptions, ConstructionState, DrawBudget,
    SolvedCoefficient, TranscriptEntry,
};
pub use expr::{CoefficientExpression, CoefficientId};
pub use params::{DrawKey, ParameterSource, Scripted, Seeded, Sequential};
pub use schedule::{
    extension_schedule, full_schedule, window_schedule, period_bound, truncated_schedule, warmup_schedule, Schedule,
    ScheduleStep, TargetEntry, TargetPattern,
};
