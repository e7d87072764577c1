use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The inputs contradict the coprimality assumptions of the analysis.
    #[error("inconsistent input: {0}")]
    Inconsistency(String),

    #[error("scan needs {required} cells but the budget is {cap}")]
    Budget { required: u128, cap: u128 },
}
