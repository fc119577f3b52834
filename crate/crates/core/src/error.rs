use thiserror::Error;

/// Errors raised by the algebraic operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {letter} is not a generator of the free group of rank {rank}")]
    MalformedLetter { letter: i64, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,

    #[error("the identity element is not allowed here")]
    IdentityNotAllowed,

    #[error("automorphism round-trip check failed on generator {generator}")]
    BrokenAutomorphism { generator: usize },

    #[error("automorphism set is not a group: {0}")]
    NotAGroup(String),

    #[error("defect bound is unknown")]
    UnknownDefect,

    #[error("resource cutoff exceeded: {what} (limit {limit})")]
    Cutoff { what: &'static str, limit: usize },

    #[error("graph mismatch")]
    GraphMismatch,

    #[error("factor mismatch: {0}")]
    FactorMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
