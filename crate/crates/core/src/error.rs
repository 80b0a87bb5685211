use thiserror::Error;

/// Errors raised by the IR, the oracles and the rewrite passes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular over GF(2)")]
    Singular,

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("gates {first} and {second} do not commute (commutator norm {norm:e})")]
    NotCommuting { first: usize, second: usize, norm: f64 },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("gate {index} ({kind}) is not supported here: {reason}")]
    UnsupportedGate {
        index: usize,
        kind: &'static str,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} needs {requested} qubits, limit is {limit}")]
    TooLarge {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("unknown random family {0:?}")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
