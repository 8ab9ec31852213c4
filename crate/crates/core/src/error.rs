use thiserror::Error;

/// Errors raised by model construction and divisor computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{}malformed graph: {message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    MalformedGraph { line: Option<usize>, message: String },

    #[error("intersection matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("singular linear system")]
    SingularLattice,

    #[error("divisor belongs to a different model")]
    ModelMismatch,

    #[error("curve index {0} out of range")]
    CurveOutOfRange(usize),

    #[error("divisor is not integral: coefficient {value} along {curve}")]
    NonIntegralInput { curve: String, value: String },

    #[error("divisor is not antinef: product {value} along {curve}")]
    NotAntinef { curve: String, value: String },

    #[error("divisor is not effective: coefficient {value} along {curve}")]
    NotEffective { curve: String, value: String },

    #[error("lambda must be positive, got {0}")]
    NonPositiveLambda(String),

    #[error("model is not log terminal: discrepancy {value} <= -1 along {curve}")]
    NotLogTerminal { curve: String, value: String },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn malformed(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::MalformedGraph {
            line,
            message: message.into(),
        }
    }
}
