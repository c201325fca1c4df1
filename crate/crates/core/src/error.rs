use thiserror::Error;

use crate::words::{Generator, Word};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown algebra family `{0}`")]
    UnknownFamily(String),

    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: String, rank: usize },

    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),

    #[error("node index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("pairing value {value} of nodes ({i}, {j}) is outside the g-function table")]
    UnsupportedPairing { i: usize, j: usize, value: i64 },

    #[error("enumeration window holds more than {cap} words")]
    WindowTooLarge { cap: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("word `{0}` is not ordered")]
    NotOrdered(Word),

    #[error("straightening exceeded {max_steps} steps at word `{word}`")]
    StraightenDiverged { max_steps: usize, word: Word },

    #[error("star product of {left} and {right} matches no case")]
    NoCase { left: Generator, right: Generator },

    #[error("distinct-node inversions survive straightening: {0:?}")]
    ResidualNotOrdered(Vec<Word>),

    #[error("p-exponent search for node {node}, argument {m} found no vanishing point within {bound} steps")]
    SearchExhausted { node: usize, m: i64, bound: i64 },

    #[error("parse error at byte {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },
}

impl Error {
    /// Faults that indicate the engine itself misbehaved, as opposed to
    /// a mathematical expectation failing on some instance.
    pub fn is_engine_fault(&self) -> bool {
        matches!(self, Error::SearchExhausted { .. })
    }

    /// Stable variant name for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownFamily(_) => "UnknownFamily",
            Error::InvalidRank { .. } => "InvalidRank",
            Error::InvalidCartan(_) => "InvalidCartan",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::UnsupportedPairing { .. } => "UnsupportedPairing",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::InvalidWindow(_) => "InvalidWindow",
            Error::NotOrdered(_) => "NotOrdered",
            Error::StraightenDiverged { .. } => "StraightenDiverged",
            Error::NoCase { .. } => "NoCase",
            Error::ResidualNotOrdered(_) => "ResidualNotOrdered",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::Parse { .. } => "Parse",
        }
    }
}
