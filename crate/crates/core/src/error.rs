use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("symbol {symbol} at ({row}, {col}) is outside 0..{order}")]
    SymbolOutOfRange { row: usize, col: usize, symbol: usize, order: usize },
    #[error("not a Latin square: {0}")]
    NotLatin(String),
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("squares {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("a family of order {order} holds at most {max} squares, got {got}")]
    FamilyTooLarge { order: usize, max: usize, got: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("dimension {0} out of range: {1}")]
    OutOfRange(usize, &'static str),
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("element is not in this field")]
    ForeignElement,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("basis elements are linearly dependent over the prime field")]
    DependentBasis,
    #[error("net design invalid: {0}")]
    InvalidNet(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(usize, usize),
    #[error("no decomposition found that makes every cell commute")]
    NoCommutingDecomposition,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("columns are not orthonormal (Gram deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("joint eigenspace of dimension > 1")]
    Degenerate,
    #[error("eigenvector residual {0:e} exceeds tolerance")]
    ResidualFailure(f64),
    #[error("graph has {0} vertices; at most 64 supported")]
    GraphTooLarge(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}
