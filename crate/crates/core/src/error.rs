use thiserror::Error;

/// Errors produced by the estimation, mechanism and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuctionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rejection sampling gave up after {proposals} proposals ({accepted} of {requested} accepted)")]
    SamplingFailure {
        proposals: u64,
        accepted: usize,
        requested: usize,
    },

    #[error("bidder {bidder}, item {item}: {source}")]
    AtPair {
        bidder: usize,
        item: usize,
        #[source]
        source: Box<AuctionError>,
    },

    #[error("query to bidder {bidder} for item {item} failed: {message}")]
    Oracle {
        bidder: usize,
        item: usize,
        message: String,
    },

    #[error("world generation failed: {0}")]
    Generation(String),
}

impl AuctionError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        AuctionError::InvalidInput(msg.into())
    }

    /// Annotates an error with the (bidder, item) pair it came from.
    pub fn at_pair(self, bidder: usize, item: usize) -> Self {
        AuctionError::AtPair {
            bidder,
            item,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = AuctionError> = std::result::Result<T, E>;
