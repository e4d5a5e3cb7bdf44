//! Error type shared across the crate.

/// Errors raised by structure maps, constructors, and verifiers.
///
/// `MissingHypothesis` is the refusal path: constructors that require a
/// verified certificate (e.g. cocommutativity of the outer bimonoid) name the
/// hypothesis that failed instead of building an unlawful object.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An input lies outside the domain of the requested map
    /// (term support mismatch, label not in a bijection's domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition on arguments failed (non-positive inner
    /// species, r >= s for a port split, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The object does not carry the capability the operation needs
    /// (e.g. no restriction structure).
    #[error("missing capability: {0}")]
    MissingCapability(String),

    /// A constructor refused because a required certificate could not be
    /// established; names the hypothesis and carries the checker's evidence.
    #[error("{construction} requires {hypothesis}: {detail}")]
    MissingHypothesis {
        construction: String,
        hypothesis: String,
        detail: String,
    },

    /// The operation is defined but deliberately not implemented at this
    /// scale or generality.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
