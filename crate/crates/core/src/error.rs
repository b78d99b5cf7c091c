use thiserror::Error;

use crate::words::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected symbol {symbol:?} at position {position}")]
    Parse { position: usize, symbol: char },
    #[error("word is not positive")]
    NotPositive,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenusError {
    #[error("chain is not a boundary: exponent sum of {generator:?} is {sum}")]
    NotBoundary { generator: char, sum: i64 },
    #[error("total length {length} exceeds the search limit {limit}")]
    SizeGuard { length: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiError {
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
    #[error(transparent)]
    Genus(#[from] GenusError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CbiError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("words are not related")]
    NotRelated,
    #[error("move {rotation}/{cuts:?} is out of bounds for a word of length {length}")]
    OutOfBounds { rotation: usize, cuts: [usize; 3], length: usize },
    #[error("word length {length} exceeds the breadth-first search limit {limit}")]
    SizeGuard { length: usize, limit: usize },
    #[error(transparent)]
    Genus(#[from] GenusError),
    #[error("orbit surgery failed: {0}")]
    Surgery(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("letter {0} is outside the alphabet {{a, b, c, d}}")]
    Alphabet(Letter),
    #[error("words are not related")]
    NotRelated,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("letter {0} is outside the alphabet {{a, b, c, d}}")]
    Alphabet(Letter),
    #[error(transparent)]
    Cbi(#[from] CbiError),
}
