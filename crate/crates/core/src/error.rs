use thiserror::Error;

/// Errors produced by the automata network library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("digit {digit} at coordinate {coordinate} is not below q = {q}")]
    InvalidDigit {
        coordinate: usize,
        digit: usize,
        q: usize,
    },

    #[error("coordinate {coordinate} is out of range for n = {n}")]
    InvalidCoordinate { coordinate: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("resource limit exceeded: {what} would exceed {limit}")]
    LimitExceeded { what: &'static str, limit: u64 },

    #[error("decomposition unavailable: {0}")]
    DecompositionUnavailable(String),

    #[error("network is not a single-coordinate instruction")]
    NotAnInstruction,

    #[error("instruction is not singular")]
    NotSingular,

    #[error("configurations {a} and {b} are not at Hamming distance 1")]
    NotAdjacent { a: usize, b: usize },

    #[error("({u}, {v}) is not an arc of the digraph")]
    NotAnArc { u: usize, v: usize },

    #[error("no directed path from {from} back to {to}")]
    NoReturnPath { from: usize, to: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("puzzle state space exceeds cap of {0} states")]
    StateCapExceeded(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
