use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input does not satisfy a structural requirement (bad partition, non-finite value, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result or enumeration would exceed what is representable or practical.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Second-order likelihood used with `n <= d(d-1)/2`.
    #[error("second-order likelihood needs n > d(d-1)/2 (n = {n}, d = {d})")]
    SecondOrderConstraint { n: u64, d: usize },

    /// Every likelihood evaluation was `-inf`.
    #[error("fit failed: {0}")]
    FitFailure(String),
}

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
