use thiserror::Error;

/// Errors produced by the synthesis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("{what} needs n <= {limit}, got n = {n}")]
    SizeLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("matrix is not square or its side is not a power of two ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("cannot parse Pauli string {input:?}: {reason}")]
    PauliParse { input: String, reason: String },

    #[error("negative denominator exponent {0}")]
    NegativeExponent(i64),

    #[error("degenerate Pauli triple: {0}")]
    DegenerateTriple(String),

    #[error("no generators for n<3")]
    TooFewQubits(usize),

    #[error("entry ({row}, {col}) = {value} is not in Z[1/2]; the unitary is not exactly implementable")]
    NotDyadic { row: usize, col: usize, value: f64 },

    #[error("numerator overflow in exact arithmetic")]
    Overflow,

    #[error("not a Clifford channel: {0}")]
    NotClifford(String),

    #[error("circuit contains a Toffoli gate; Clifford-only operation requested")]
    ToffoliInClifford,

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("reconstruction failed: {0}")]
    Reconstruction(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
