use thiserror::Error;

/// Errors raised by the operator algebra, transcoder, compiler and simulator.
///
/// Spin fields hold zero-based indices; messages print them one-based to match
/// the text file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{n} spins exceeds the dense cap of {cap}")]
    TooManySpins { n: usize, cap: usize },

    #[error("spin count must be at least 1")]
    NoSpins,

    #[error("spin {} out of range for {n} spins", .spin + 1)]
    SpinOutOfRange { spin: usize, n: usize },

    #[error("basis index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("vector length {len} does not match 2^{n}")]
    LengthMismatch { len: usize, n: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("operator does not square to the identity (coefficient {coeff})")]
    NonInvolutory { coeff: String },

    #[error("operator is not Hermitian")]
    NonHermitian,

    #[error("deviation state has nonzero trace {trace}")]
    NonTraceless { trace: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("term is not diagonal: {term}")]
    NonDiagonal { term: String },

    #[error("no coupling between spins {} and {}", .a + 1, .b + 1)]
    MissingCoupling { a: usize, b: usize },

    #[error("spins {} and {} are not connected in the coupling graph", .a + 1, .b + 1)]
    Unroutable { a: usize, b: usize },

    #[error("spin {} appears more than once", .spin + 1)]
    DuplicateSpin { spin: usize },

    #[error("invalid event: {0}")]
    InvalidEvent(String),

    #[error("gradient events have no unitary representation")]
    GradientInUnitary,

    #[error("invalid acquisition parameters: {0}")]
    Sampling(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
