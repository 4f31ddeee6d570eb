use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("stream positions are 1-based; position 0 is not part of the expansion")]
    ZeroPosition,

    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("word ordinal {ordinal} out of range for word length {word_length} in base {base}")]
    WordOrdinalOutOfRange {
        word_length: u32,
        ordinal: String,
        base: u32,
    },

    #[error("window width must be at least 1")]
    ZeroWidth,

    #[error("sequence width must be between 1 and 64, got {0}")]
    WidthOutOfRange(u32),

    #[error("sequence width {width} too small for N = {n_len}: need width >= {needed}")]
    WidthTooSmall { width: u32, n_len: u64, needed: u32 },

    #[error("beta must be a rational in (0, 1], got {0}")]
    BetaOutOfRange(String),

    #[error("threshold denominator must be positive")]
    ZeroDenominator,

    #[error("uniform sequences require a seed")]
    MissingSeed,

    #[error("Kronecker sequences require a parameter numerator")]
    MissingParameter,

    #[error("s grid must be nonempty")]
    EmptyGrid,

    #[error("s grid must be sorted in ascending order")]
    UnsortedGrid,

    #[error("parameter domain violation: {0}")]
    DomainViolation(String),

    #[error("block of words of length {d} too large to materialize (limit d <= {max})")]
    BlockTooLarge { d: u32, max: u32 },

    #[error("scope requires {needed} context bits per side but the block was built with {margin}")]
    ScopeExceedsMargin { needed: u64, margin: u64 },

    #[error("sample of length {n_len} too large for this operation (limit {max})")]
    SampleTooLarge { n_len: u64, max: u64 },

    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),

    #[error("{0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
