use thiserror::Error;

use crate::arena::Player;

/// Errors raised by the library. Negative answers (player 1 wins, empty
/// language, no strategy within a bound) are ordinary return values, not
/// errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("game is not a one-player game for player 0: {0}")]
    NotOnePlayer(String),

    #[error("unknown action index {index} for player {player}")]
    ActionUnknown { player: Player, index: usize },

    #[error("malformed strategy: {0}")]
    MalformedStrategy(String),

    #[error("strategy is undefined at the reached configuration: {0}")]
    Undefined(String),

    #[error("expected a strategy for player {expected}, got one for player {found}")]
    WrongPlayer { expected: Player, found: Player },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("search cancelled")]
    Cancelled,

    #[error("player 0 does not win this game")]
    PlayerZeroLoses,

    #[error("vertex set is not a cover: edge {edge} is uncovered")]
    NotACover { edge: usize },

    #[error("strategy is not winning")]
    NotWinning,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A positioned parse failure. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
