use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("field matrix has no signal row")]
    NoSignal,
    #[error("field matrix has {0} signal rows, expected exactly one")]
    MultipleSignals(usize),
    #[error("sensor array is not point symmetric for the requested sign string")]
    NotPointSymmetric,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("duration {duration} is not a whole number of periods of omega = {omega}")]
    NonIntegerPeriods { duration: f64, omega: f64 },
    #[error("value {value} outside the allowed range for {what}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("rows of incompatible kinds cannot be combined: {0}")]
    IncompatibleRows(&'static str),
    #[error(
        "signal is linearly dependent on the noise at the sensor positions \
         (residual {residual:e}); use more sensors (n > d for known phases, \
         n > 2d for unknown phases) or an approximate DFS"
    )]
    DegenerateSignal { residual: f64 },
    #[error("orthogonalization produced an isotropic row (z-weighted norm {0:e} of a nonzero row)")]
    IsotropicRow(f64),
    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("duplicate sign string in the protected set")]
    DuplicateState,
    #[error("zero wave vector")]
    ZeroWaveVector,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("Hamming precondition violated: distance {found} < required {required}")]
    HammingPrecondition { found: usize, required: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}
