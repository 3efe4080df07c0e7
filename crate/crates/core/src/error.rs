use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("element is not even")]
    NotEven,
    #[error("body is not invertible")]
    BodyNotInvertible,
    #[error("matrix is not even")]
    NotEvenMatrix,
    #[error("body of det0 is not invertible: matrix is not in GL")]
    SingularBody,
    #[error("matrix formats differ: {0}")]
    FormatMismatch(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("invalid ring declaration: {0}")]
    InvalidSpec(String),
    #[error("specification mismatch: {0}")]
    SpecMismatch(String),
    #[error("inconsistent structure map: {0}")]
    InconsistentModule(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("not GL-primitive: entry ({row},{col}) of F({generator}) is {entry}")]
    NotPrimitive { generator: String, row: usize, col: usize, entry: String },
    #[error("parity order violation: {0}")]
    ParityOrder(String),
    #[error("non-polynomial entry: {0}")]
    NonPolynomial(String),
    #[error("functional is not homogeneous")]
    NotHomogeneous,
    #[error("validation failed: {0}")]
    Validation(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse { line: 1, column, message: message.into() }
    }
}
