use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(C64),

    #[error("point lies outside the ball: distance {distance} to the center, radius {radius}")]
    OutsideBall { distance: f64, radius: f64 },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptySet,

    #[error("non-finite input value")]
    NonFinite,

    #[error(
        "root solver did not converge after {iterations} iterations and {restarts} restarts \
         (residual {residual:e})"
    )]
    NoConvergence {
        iterations: usize,
        restarts: usize,
        residual: f64,
    },

    #[error("point lies outside {domain} (gauge {gauge})")]
    OutsideDomain { domain: String, gauge: f64 },

    #[error("unbounded gauge: no bracketing scale t <= 2^60 found")]
    UnboundedGauge,

    #[error("membership predicate of {0} is not monotone along the probed ray")]
    NonMonotone(String),

    #[error("map does not fix the origin: |f(0)| = {0:e}")]
    OriginNotFixed(f64),

    #[error("eigenvalue {0} lies outside the open unit disk")]
    SpectrumOutsideDisk(C64),

    #[error("singular matrix factor")]
    SingularFactor,

    #[error("degenerate map: identically the origin after rescaling")]
    DegenerateMap,

    #[error("membership audit failed: {failures} of {samples} samples left the target")]
    AuditFailure { failures: usize, samples: usize },

    #[error("no admissible sample after {0} attempts")]
    SamplingExhausted(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
