use std::fmt;

/// Crate-wide error type. Variants map onto the CLI exit-code classes:
/// invalid input (2), unsupported combination (3), internal inconsistency (4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Modulus given for a prime field is not prime.
    NotPrime(u64),
    /// A representation or module file violates a structural rule.
    /// The message names the offending vertex, arrow, or square.
    Validation(String),
    /// Textual input could not be parsed.
    Parse(String),
    /// A vertex set is not the support of any interval (reason included).
    NotAnInterval(String),
    /// Operation defined only for a narrower class of inputs.
    Unsupported(String),
    /// Two independently computed answers disagree, or an internal
    /// certificate failed. Always a bug or a broken input file.
    Inconsistency(String),
    /// Randomized search ended without a certificate either way.
    BudgetExhausted(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::Validation(m) => write!(f, "invalid representation: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::NotAnInterval(m) => write!(f, "not an interval support: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Inconsistency(m) => write!(f, "internal inconsistency: {m}"),
            Error::BudgetExhausted(m) => write!(f, "trial budget exhausted: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
