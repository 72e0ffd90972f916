use thiserror::Error;

/// Errors raised by graph exploration, the samplers and the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex budget of {limit} exceeded")]
    Budget { limit: usize },

    #[error("permutation property violated at {vertex} for letter {letter}")]
    PermutationViolation { vertex: String, letter: String },

    #[error("probability {0} is outside the open interval (0,1)")]
    InvalidProbability(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed graph: {0}")]
    Malformed(String),

    #[error("symbol {0} is not in the alphabet 1..=n")]
    InvalidAlphabet(u32),

    #[error("word {0} is not in the image of phi")]
    NotInImage(String),

    #[error("graph is not in Z: {0}")]
    NotInZ(String),

    #[error("no translate in L lands in Z: graph is not in Y")]
    NotInY,

    #[error("ambiguous retraction at radius {radius}: {msg}")]
    Ambiguous { radius: usize, msg: String },

    #[error("measure is not invariant under the action: {0}")]
    NotInvariant(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// True for resource-limit failures, as opposed to bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
