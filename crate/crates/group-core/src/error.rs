use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("map is not an involution: {0}")]
    NotAnInvolution(String),
    #[error("alphabet size {d} is below 3")]
    DegreeTooSmall { d: usize },
    #[error("letter {letter} out of range for d = {d}")]
    LetterOutOfRange { letter: usize, d: usize },
    #[error("word is not reduced at position {position}")]
    NotReduced { position: usize },
    #[error("words live over different alphabets")]
    AlphabetMismatch,
    #[error("invalid probability vector: {0}")]
    InvalidMass(String),
    #[error("p_{i} + p_{j} = 0 for the pair ({i}, {j}) (1-based)")]
    HippoViolated { i: usize, j: usize },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}
