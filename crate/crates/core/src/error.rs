use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),
    /// The operation is not defined (or not decidable here) for this structure.
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("ball size cap of {cap} elements exceeded at depth {depth}")]
    BallCap { cap: usize, depth: usize },
    /// An enclosure was too wide to decide a strict inequality.
    #[error("{bits}-bit precision too low to certify {what}; retry with higher precision")]
    Precision { bits: u32, what: String },
    /// A required certificate could not be established.
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("element has augmentation {0}, expected 0")]
    NonZeroAugmentation(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
