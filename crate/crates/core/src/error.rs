use thiserror::Error;

/// Errors raised by the compiler pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("unitarity check failed: max |M^dagger M - I| = {deviation:e} is not below tolerance {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("invalid ordering pair ({row}, {col}) for dimension {dim}: need dim > row > col")]
    InvalidPair { row: usize, col: usize, dim: usize },

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("invalid order array: {0}")]
    InvalidOrder(String),

    #[error("invalid gray code endpoints {from} -> {to} on {n} qubits")]
    GrayEndpoints { from: usize, to: usize, n: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("circuit is not a concatenation of palindromic subcircuits: {0}")]
    NotPalindromic(String),

    #[error("duplicate subcircuit for pair ({row}, {col})")]
    DuplicateSubcircuit { row: usize, col: usize },

    #[error("sequence is not a permutation of the trie leaves")]
    NotAPermutation,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
