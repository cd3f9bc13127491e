use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An action index is outside a player's action set.
    #[error("player {player}: action {action} out of range (player has {limit} actions)")]
    ActionOutOfRange {
        player: usize,
        action: usize,
        limit: usize,
    },

    /// A profile has the wrong number of entries.
    #[error("profile has {got} entries, game has {expected} players")]
    ProfileLength { expected: usize, got: usize },

    /// A player index is not valid for the game.
    #[error("player index {player} out of range (game has {count} players)")]
    PlayerOutOfRange { player: usize, count: usize },

    /// A utility table has the wrong number of entries.
    #[error("player {player}: utility table has {got} entries, expected {expected}")]
    UtilityLength {
        player: usize,
        expected: usize,
        got: usize,
    },

    /// A payoff lies outside the unit interval.
    #[error("player {player}: payoff {value} at profile {profile} outside [0,1]")]
    PayoffOutOfRange {
        player: usize,
        profile: usize,
        value: f64,
    },

    /// Input text could not be parsed at all.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A probability vector or map does not describe a distribution.
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// Distribution and game shapes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A joint distribution was supplied where a product one is required.
    #[error("operation requires a product distribution")]
    NotProductForm,

    /// A scalar argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested computation exceeds a configured size cap.
    #[error("capability exceeded: {0}")]
    CapabilityExceeded(String),

    /// Filesystem trouble while loading or saving.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
