use thiserror::Error;

/// Errors raised by the certified numerics layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the operation's mathematical domain.
    #[error("{op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Precision below the supported minimum.
    #[error("precision must be at least {min} bits, got {bits}")]
    Precision { bits: u32, min: u32 },

    /// A decision could not be certified before the precision ceiling.
    #[error("{what}: undecided at {bits} bits")]
    Undecided { what: String, bits: u32 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
