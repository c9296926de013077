use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("domain of size {size} exceeds the bound of {bound}")]
    DomainTooLarge { size: usize, bound: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{0}` is bound twice on one path")]
    ShadowedVariable(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} is outside the domain of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("empty quantifier restriction on `{0}`")]
    EmptyRestriction(String),
    #[error("unsupported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
