use thiserror::Error;

pub type Result<T> = std::result::Result<T, JelError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JelError {
    #[error("sample of size {n} is too small (need at least {required})")]
    SampleTooSmall { n: usize, required: usize },

    #[error("non-finite input value at position {index}")]
    NonFiniteInput { index: usize },

    #[error("index {index} out of range for sample of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("correlation must lie strictly inside (0, 1), got {0}")]
    InvalidCorrelation(f64),

    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("auxiliary variable has zero variance in the sample")]
    DegenerateAuxiliary,

    #[error("calibration produced a non-positive weight at position {index} ({weight})")]
    PositivityViolation { index: usize, weight: f64 },

    #[error("zero is not an interior point of the convex hull of the constraint values")]
    InfeasibleConstraint,

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("singular Jacobian in the multiplier equations")]
    SingularJacobian,

    #[error("EL weight denominator is not positive at position {index}")]
    BoundaryViolation { index: usize },

    #[error("missing {0} weights")]
    MissingWeights(&'static str),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown kernel {0:?}")]
    UnknownKernel(String),

    #[error("file not found: {0}")]
    FileNotFound(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl JelError {
    /// Input, schema and configuration problems as opposed to numerical
    /// failures; the CLI maps these to different exit codes.
    pub fn is_usage_error(&self) -> bool {
        matches!(
            self,
            JelError::FileNotFound(_)
                | JelError::Schema(_)
                | JelError::Config(_)
                | JelError::Io(_)
                | JelError::UnknownKernel(_)
                | JelError::InvalidArgument(_)
                | JelError::MissingWeights(_)
                | JelError::InvalidCorrelation(_)
                | JelError::InfeasibleDesign(_)
        )
    }
}

impl From<std::io::Error> for JelError {
    fn from(e: std::io::Error) -> Self {
        JelError::Io(e.to_string())
    }
}

impl From<csv::Error> for JelError {
    fn from(e: csv::Error) -> Self {
        JelError::Schema(e.to_string())
    }
}
