use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("divisor does not divide the dividend exactly")]
    NotDivisible,
    #[error("index ({0}, {1}) out of range for matrix size {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("element is not a coinvariant")]
    NotCoinvariant,
    #[error("generator table system is unsolvable: {0}")]
    InconsistentConvention(String),
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("negative power of a generator at {0}")]
    NegativePowerOfGenerator(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
