use crate::eigensolver::EigenResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("{requested} qubits need {bytes} bytes, above the limit of {limit} qubits")]
    TooManyQubits {
        requested: usize,
        limit: usize,
        bytes: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("eigensolver did not converge after {} iterations (residual {:.3e})", best.iterations, best.residual)]
    NotConverged { best: Box<EigenResult> },

    #[error(transparent)]
    Optimizer(#[from] crate::optimizers::OptError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
