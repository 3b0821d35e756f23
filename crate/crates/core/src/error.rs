use thiserror::Error;

/// Errors raised by the combinatorial and algebraic routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation at position {position}: {reason}")]
    InvalidPermutation { position: usize, reason: String },

    #[error("rank {rank} exceeds the supported maximum of {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("generator s_{letter} is out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("word {0} is not reduced")]
    NotReduced(String),

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("word length {length} exceeds the enumeration cap {cap}")]
    LengthCapExceeded { length: usize, cap: usize },

    #[error("rank {rank} exceeds the search cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },

    #[error("mask has length {mask} but the word has length {word}")]
    MaskLengthMismatch { mask: usize, word: usize },

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("{0} is not maximally clustered")]
    NotMaximallyClustered(String),

    #[error("{0} is not maximally clustered and hexagon-avoiding")]
    NotMCHexagonAvoiding(String),

    #[error("{0} is not a braid cluster")]
    NotABraidCluster(String),

    #[error("decomposition has no braid clusters")]
    NoClusters,

    #[error("mask has no 10* instance")]
    No10StarInstance,

    #[error("{0} is not in the pattern class")]
    NotInClass(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPermutation { .. } => "InvalidPermutation",
            Error::RankTooLarge { .. } => "RankTooLarge",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::LetterOutOfRange { .. } => "LetterOutOfRange",
            Error::InvalidWord(_) => "InvalidWord",
            Error::NotReduced(_) => "NotReduced",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::LengthCapExceeded { .. } => "LengthCapExceeded",
            Error::RankCapExceeded { .. } => "RankCapExceeded",
            Error::MaskLengthMismatch { .. } => "MaskLengthMismatch",
            Error::InvalidMask(_) => "InvalidMask",
            Error::NotMaximallyClustered(_) => "NotMaximallyClustered",
            Error::NotMCHexagonAvoiding(_) => "NotMCHexagonAvoiding",
            Error::NotABraidCluster(_) => "NotABraidCluster",
            Error::NoClusters => "NoClusters",
            Error::No10StarInstance => "No10StarInstance",
            Error::NotInClass(_) => "NotInClass",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
