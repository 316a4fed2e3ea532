use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("NonFinite: {0} is not finite")]
    NonFinite(&'static str),
    #[error("NotPositiveDefinite: {0}")]
    NotPositiveDefinite(&'static str),
    #[error("ComplexRoots: characteristic roots are not both real and positive")]
    ComplexRoots,
    #[error("DegenerateRoots: lambda1 and lambda2 coincide (relative gap {gap:e})")]
    DegenerateRoots { gap: f64 },
    #[error("ZeroDelta: k1*lambda1 - k2*lambda2 vanishes")]
    ZeroDelta,
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("PoleHit: field point coincides with the ring pole")]
    PoleHit,
    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),
    #[error("DecayViolation: {0}")]
    DecayViolation(String),
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("DegeneratePoint: contour speed vanishes at s = {0}")]
    DegeneratePoint(f64),
    #[error("DegenerateContour: {0}")]
    DegenerateContour(String),
    #[error("SingularSystem: {0}")]
    SingularSystem(String),
    #[error("PointOutside: ({0}, {1}) is not inside the region")]
    PointOutside(f64, f64),
    #[error("PoleInsideRegion: ring pole ({0}, {1}) is inside or too close to the region")]
    PoleInsideRegion(f64, f64),
}

pub type Result<T> = std::result::Result<T, Error>;
