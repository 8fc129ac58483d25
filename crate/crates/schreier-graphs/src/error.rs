use group_core::GroupError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("fixed-point-free involutions need an even size, got n = {n}")]
    OddSizeWithMatchings { n: usize },
    #[error("perms[{i}*] is not the inverse of perms[{i}] (1-based letter {i})")]
    InvolutionConstraintViolated { i: usize },
    #[error("perm {i} is not a bijection of [n]: {msg}")]
    NotAPermutation { i: usize, msg: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("color mismatch: {0}")]
    ColorMismatch(String),
    #[error("invalid base chain: {0}")]
    InvalidBase(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("checksum mismatch: file says {expected}, content hashes to {actual}")]
    Checksum { expected: String, actual: String },
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<std::io::Error> for GraphError {
    fn from(e: std::io::Error) -> Self {
        GraphError::Io(e.to_string())
    }
}
