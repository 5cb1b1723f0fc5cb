use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {re} + {im}i is not in the upper half-plane")]
    InvalidPoint { re: f64, im: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("Im z = {im} is below the evaluation floor {floor}")]
    BelowImFloor { im: f64, floor: f64 },

    #[error("tolerance unreachable: {0}")]
    ToleranceUnreachable(String),

    #[error("integrand is not finite at z = {re} + {im}i")]
    NonFiniteIntegrand { re: f64, im: f64 },

    #[error("circle radius {radius} does not fit above the real axis (Im center = {im})")]
    RadiusTooLarge { radius: f64, im: f64 },

    #[error("cannot deform contour: {0}")]
    CannotDeform(String),

    #[error("near pole: denominator magnitude {denominator:e} below floor {floor:e}")]
    NearPole { denominator: f64, floor: f64 },

    #[error("tau = {re} + {im}i is outside region S")]
    OutsideRegionS { re: f64, im: f64 },

    #[error("singular lattice basis (|det| = {det:e})")]
    SingularBasis { det: f64 },

    #[error("enumeration budget of {budget} vectors exceeded")]
    EnumerationBudgetExceeded { budget: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
