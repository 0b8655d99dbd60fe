use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("mixed field operands: {0} and {1}")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is out of range (must be < 2^62)")]
    ModulusTooLarge(u64),

    #[error("cannot parse scalar {0:?}: {1}")]
    ParseScalar(String, String),

    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),

    #[error("edge ({i},{j}) is not an edge of K_{n}")]
    BadEdge { i: usize, j: usize, n: usize },

    #[error("column index {index} out of range 1..={max}")]
    BadColumn { index: usize, max: usize },

    #[error("equation index {k} out of range 1..={max}")]
    BadEquation { k: usize, max: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("tensor is not a basis tensor: slot {0} is not a standard basis vector")]
    NotBasisTensor(String),

    #[error("color {color} out of range 1..={d} at edge {edge}")]
    BadColor { color: usize, d: usize, edge: String },

    #[error("exhaustive enumeration for d={d} requires the override flag")]
    EnumerationTooLarge { d: usize },

    #[error("matrix of size {n} exceeds the cofactor oracle cap of {cap}")]
    OracleTooLarge { n: usize, cap: usize },

    #[error("invalid input: {0}")]
    Input(String),

    /// A mathematical invariant failed; carries a serialized counterexample.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True when the error means "the math failed" rather than "bad input".
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}
