use thiserror::Error;

use crate::field::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grade {0} is outside 0..=4")]
    GradeOutOfRange(usize),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("point {point} lies outside the field domain")]
    OutOfDomain { point: Point },

    #[error("finite-difference stencil along axis {axis} at {point} leaves the field domain")]
    StencilOutOfDomain { point: Point, axis: usize },

    #[error("diffeomorphism maps {point} outside the target domain")]
    DomainEscape { point: Point },

    #[error("jacobian is singular at {point} (|det| = {det:e})")]
    SingularJacobian { point: Point, det: f64 },

    #[error("coframe legs are not linearly independent at {point} (|det| = {det:e})")]
    DegenerateCoframe { point: Point, det: f64 },

    #[error("metric eigenvalue {eigenvalue:e} is below the cutoff")]
    NearSingularMetric { eigenvalue: f64 },

    #[error("extensor is not symmetric with respect to the Minkowski product (defect {defect:e})")]
    NonSymmetric { defect: f64 },

    #[error("invalid finite-difference scheme: {0}")]
    InvalidScheme(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    ParamOutOfRange {
        name: String,
        value: f64,
        reason: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
