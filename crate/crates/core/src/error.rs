use std::io;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operation requires a discrete parent distribution")]
    RequiresDiscrete,
    #[error("operation requires a continuous parent distribution")]
    RequiresContinuous,
    #[error("index sets S and V overlap at index {0}")]
    OverlappingSets(usize),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("subset budget exceeded: C({n},{k}) = {count} > {budget}; use sequential_select instead")]
    BudgetExceeded {
        n: usize,
        k: usize,
        count: u128,
        budget: u128,
    },
    #[error("measure r{0} is infinite for every index of a continuous parent")]
    InfiniteMeasure(u8),
    #[error("too few Monte Carlo trials: {got} < {min}")]
    TooFewTrials { got: usize, min: usize },
    #[error("window length {got} does not match filter length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid PGM data: {0}")]
    Pgm(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
