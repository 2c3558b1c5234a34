use thiserror::Error;

/// Errors raised across the library. Messages are prefixed with the module
/// that produced them so the CLI can surface them unchanged.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polytope: degenerate input: {0}")]
    DegenerateInput(String),
    #[error("polytope: unknown vertex index {0}")]
    UnknownVertex(usize),
    #[error("polytope: origin is not an interior point")]
    OriginNotInterior,
    #[error("{module}: bad parameters: {msg}")]
    BadParameters { module: &'static str, msg: String },
    #[error("flag-simplex: point {point:?} is not in the relative interior of face {face:?}")]
    PointNotInRelativeInterior { face: Vec<usize>, point: Vec<f64> },
    #[error("flag-simplex: simplices belong to different flags")]
    FlagMismatch,
    #[error("weighted-measure: point {0:?} lies outside the weight's domain")]
    OutOfDomain(Vec<f64>),
    #[error("weighted-measure: tolerance {tol:e} not reached (error estimate {estimate:e})")]
    ToleranceNotReached { tol: f64, estimate: f64 },
    #[error("floating-body: delta {delta:e} outside the admissible range (0, {max:e}]")]
    DeltaOutOfRange { delta: f64, max: f64 },
    #[error("floating-body: direction refinement stalled (last relative change {change:e}, tolerance {tol:e})")]
    DirectionRefinementStalled { change: f64, tol: f64 },
    #[error("asymptotics: ill-conditioned fit (condition number {0:e})")]
    IllConditioned(f64),
    #[error("geometry-models: point is not in the open halfsphere around the base point")]
    NotInOpenHalfsphere,
    #[error("geometry-models: delta {0:e} too large for a positive floating radius")]
    DeltaTooLarge(f64),
    #[error("geometry-models: point lies outside the open unit ball")]
    OutsideBall,
    #[error("geometry-models: polytope has an ideal vertex")]
    IdealVertexPresent,
    #[error("io: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn bad(module: &'static str, msg: impl Into<String>) -> Self {
        Error::BadParameters {
            module,
            msg: msg.into(),
        }
    }

    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotReached { .. }
                | Error::DirectionRefinementStalled { .. }
                | Error::IllConditioned(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
