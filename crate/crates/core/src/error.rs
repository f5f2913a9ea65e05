use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading concrete syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownSymbol,
    ArityMismatch,
    /// An atom where a variable was expected, or the other way round.
    Namespace,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
            ParseErrorKind::ArityMismatch => "arity mismatch",
            ParseErrorKind::Namespace => "namespace violation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid position {0}")]
    InvalidPosition(String),

    #[error("term `{0}` contains variables; a ground term is required")]
    OpenTerm(String),

    #[error("equivalence class exceeds the bound of {bound} elements")]
    ClassTooLarge { bound: usize },

    #[error("refusing to enumerate permutations of {0} atoms (limit is 7)")]
    SizeLimit(usize),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` expects {expected} argument(s), found {found}")]
    ArityMismatch { symbol: String, expected: usize, found: usize },

    #[error("signature: {0}")]
    Signature(String),

    #[error("permutation: {0}")]
    Permutation(String),

    #[error("constraint: {0}")]
    Constraint(String),

    #[error("rule `{name}`: {reason}")]
    Rule { name: String, reason: String },

    #[error("configuration: {0}")]
    Config(String),

    #[error("{line}:{col}: {kind}: {message}")]
    Parse { kind: ParseErrorKind, line: usize, col: usize, message: String },
}

impl Error {
    pub fn parse_kind(&self) -> Option<ParseErrorKind> {
        match self {
            Error::Parse { kind, .. } => Some(*kind),
            _ => None,
        }
    }
}
