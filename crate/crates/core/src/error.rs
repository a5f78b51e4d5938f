use thiserror::Error;

/// Crate-wide error type. Every fallible operation reports one of these;
/// nothing in the library panics on user-supplied data.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the input exponents or values is violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact rational arithmetic left the 64-bit range.
    #[error("rational overflow: {0}")]
    Overflow(String),

    /// A mixed-norm spec does not match the tensor order.
    #[error("spec mismatch: tensor order {order}, spec length {spec_len}")]
    SpecMismatch { order: usize, spec_len: usize },

    /// Vector or tensor dimensions disagree.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// Sign enumeration would exceed the hard guard.
    #[error("enumeration too large: {0}")]
    TooLarge(String),

    /// A quotient against a zero norm certificate was requested.
    #[error("zero norm in denominator")]
    ZeroNorm,

    /// A non-admissible pair that none of the blow-up regions covers.
    #[error("unclassified: non-admissible pair matches no region")]
    Unclassified,

    /// Malformed textual input (exponent strings, tensor files).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
