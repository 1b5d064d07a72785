use alloc::string::String;

use crate::rational::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("every coordinate is zero")]
    AllZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("the map is undefined at the point: all coordinate forms vanish")]
    IndeterminatePoint,
    #[error("coordinate height exceeded {max_bits} bits after {steps} steps")]
    HeightExceeded { steps: usize, max_bits: u64 },
    #[error("point is not periodic with period {0}")]
    NotPeriodic(usize),
    #[error("point returns after {0} steps, a proper divisor of the requested period")]
    PeriodDivides(usize),

    #[error("period {period} outside 1..={bound} for dimension {dimension}")]
    PeriodOutOfRange { dimension: usize, period: usize, bound: usize },
    #[error("step {step}, coordinate {coordinate}: image depends on unknowns the step does not solve")]
    NonlinearDependence { step: usize, coordinate: usize },
    #[error("step {step}, coordinate {coordinate}: solved coefficient has zero multiplier")]
    UnsolvableStep { step: usize, coordinate: usize },
    #[error("step {step}, coordinate {coordinate}: determined value {value} is excluded")]
    DegenerateImage { step: usize, coordinate: usize, value: Rational },
    #[error("step {step}: image revisits an earlier orbit point")]
    OrbitCollision { step: usize },
    #[error("step {step}: no admissible draw within the per-step attempt limit")]
    ForbiddenExhausted { step: usize },
    #[error("constructed orbit failed certification: {0}")]
    PrimitivityFailure(String),
    #[error("retry budget of {budget} draws exhausted (last failure: {last})")]
    RetryBudgetExhausted { budget: usize, last: String },
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
    #[error("unknown coefficient {0}")]
    UnknownCoefficient(String),

    #[error("point is not in the affine chart (last coordinate is zero)")]
    NotInChart,
    #[error("map does not split into independent blocks at {0}")]
    NotSplittable(usize),
    #[error("plan infeasible: block {block} could not be realized ({reason})")]
    PlanInfeasible { block: usize, reason: String },
}

impl Error {
    /// Failures caused by unlucky free-parameter values rather than by a
    /// malformed schedule or input. The constructor backtracks on these.
    pub fn is_recoverable(&self) -> bool {
        matches!(
            self,
            Error::UnsolvableStep { .. }
                | Error::DegenerateImage { .. }
                | Error::OrbitCollision { .. }
                | Error::ForbiddenExhausted { .. }
                | Error::PrimitivityFailure(_)
                | Error::NonlinearDependence { .. }
                | Error::IndeterminatePoint
        )
    }
}
