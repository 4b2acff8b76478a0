use thiserror::Error;

/// Failure modes of the solver layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("circles are concentric with equal radii")]
    ConcentricIdentical,
    #[error("direction undefined: {0}")]
    DegenerateDirection(&'static str),
    #[error("sensors are collinear or coincident")]
    DegenerateTriangle,
    #[error("three measurement circles pass through a common point")]
    DegenerateArrangement,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("no sign change for the d3* bracket (g(1) = {g1:e})")]
    NoBracket { g1: f64 },
    #[error("grid bounds too small: {0}")]
    BoundsTooSmall(String),
    #[error("noise draw rejected after {0} attempts")]
    NoiseRejection(usize),
    #[error("circles {0} do not intersect")]
    MissingIntersection(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ConcentricIdentical => "ConcentricIdentical",
            Error::DegenerateDirection(_) => "DegenerateDirection",
            Error::DegenerateTriangle => "DegenerateTriangle",
            Error::DegenerateArrangement => "DegenerateArrangement",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::NoBracket { .. } => "NoBracket",
            Error::BoundsTooSmall(_) => "BoundsTooSmall",
            Error::NoiseRejection(_) => "NoiseRejection",
            Error::MissingIntersection(_) => "MissingIntersection",
            Error::Internal(_) => "Internal",
        }
    }

    /// True for errors caused by degenerate sensor or circle geometry.
    pub fn is_degenerate_geometry(&self) -> bool {
        matches!(
            self,
            Error::ConcentricIdentical
                | Error::DegenerateDirection(_)
                | Error::DegenerateTriangle
                | Error::DegenerateArrangement
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::PreconditionViolation(msg.into())
}
