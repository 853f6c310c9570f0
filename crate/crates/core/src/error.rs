use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    InvalidPermutation(String),
    #[error("letter {letter} outside alphabet [1, {k}]")]
    LetterOutOfRange { letter: usize, k: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("polynomial arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("division by x_{i} - x_{j} left a nonzero remainder", j = .i + 1)]
    NonzeroRemainder { i: usize },
    #[error("support outside the expected window: {0}")]
    OutsideRectangle(String),
    #[error("expansion check failed: {0}")]
    LemmaViolation(String),
    #[error("k^n = {size} exceeds the ceiling {limit} (n = {n}, k = {k})")]
    TooLarge { n: usize, k: usize, size: u128, limit: u128 },
    #[error("refusing to materialize {what} for n = {n}; iterate instead")]
    MaterializationLimit { what: &'static str, n: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("matrix column {0} is zero")]
    ZeroColumn(usize),
    #[error("matrix shape: {0}")]
    Shape(String),
    #[error("redundant column {0} has no nonzero entry in an initial-letter row")]
    NoInitialEntry(usize),
    #[error("basis check failed: {0}")]
    BasisFailure(String),
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
}
