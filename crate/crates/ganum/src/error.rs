use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on the mathematical domain of an operation failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed factorization text or numeric literal.
    #[error("parse error: {0}")]
    Parse(String),

    /// An integer too large for the built-in factoring routine.
    #[error("{0} is too large to factor here; supply an explicit factorization like \"2^4*3^2*5*7\"")]
    TooLargeToFactor(String),

    /// A prime-table query beyond the sieved range.
    #[error("query at {x} exceeds the prime table limit {limit}; rebuild the table with a larger sieve limit")]
    SieveRange { x: f64, limit: u64 },

    /// A brute-force scan was asked for a range it is not meant to cover.
    #[error("limit {limit} exceeds the brute-force cap {cap}; use the CA-based generator for larger ranges")]
    BruteForceLimit { limit: u64, cap: u64 },

    /// A guarded comparison stayed ambiguous at the precision cap.
    #[error("comparison of {context} is still indeterminate at {digits} digits")]
    Indeterminate { context: String, digits: u32 },

    /// Two facts that cannot hold simultaneously were both observed.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
