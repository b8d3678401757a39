use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two points that must be distinct coincide.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("point ({x}, {y}) does not lie on the geodesic")]
    OffCurve { x: f64, y: f64 },
    /// The equal-angle condition is undefined on the y-axis.
    #[error("point ({x}, {y}) lies on the y-axis")]
    OnAxis { x: f64, y: f64 },
    #[error("heights must be strictly decreasing: {0}")]
    Ordering(String),
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("witness search failed: {0}")]
    SearchFailure(String),
    #[error("target {target} is not bracketed by [{lo_value}, {hi_value}]")]
    NoStraddle {
        target: f64,
        lo_value: f64,
        hi_value: f64,
    },
    #[error("nothing to render")]
    EmptyInput,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
