use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("gradient norm {0:e} is too small to define a unit normal")]
    DegenerateGradient(f64),
    #[error("point is not on the boundary (|rho| = {0:e})")]
    NotOnBoundary(f64),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("no boundary point located after {0} attempts; check the bounding box")]
    NoBoundaryFound(usize),
    #[error("no interior point located after {0} attempts; check the bounding box")]
    NoInteriorFound(usize),
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("sample set is empty")]
    EmptySamples,
    #[error("boundary point is not globally strongly convex (pinching = 0)")]
    NotGsc,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),
    #[error("basepoint maps to {0:e} instead of the origin")]
    BasepointNotMappedToZero(f64),
    #[error("sampled image escapes the unit ball (|f(z)| = {0})")]
    ImageEscapesBall(f64),
    #[error("pinching function is not decreasing near r = {0}")]
    NotDecreasing(f64),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("unknown embedding `{0}`")]
    UnknownEmbedding(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by invalid inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange(_)
                | Error::ShapeMismatch(_)
                | Error::SymmetryViolation(_)
                | Error::UnknownDomain(_)
                | Error::UnknownEmbedding(_)
                | Error::BadParams(_)
                | Error::OutsideDomain
                | Error::NotOnBoundary(_)
                | Error::EmptySamples
        )
    }
}
