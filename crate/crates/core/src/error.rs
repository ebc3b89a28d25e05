use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("shape mismatch: state has {state} addresses, config has {config}")]
    ShapeMismatch { state: u64, config: u64 },

    #[error("contract violation: {0}")]
    Contract(&'static str),

    #[error(
        "N = {n} exceeds the dense backend cap of {cap}; use the reduced backend or raise the cap"
    )]
    DenseCapExceeded { n: u64, cap: u64 },

    #[error("invalid pipeline script: {0}")]
    Script(&'static str),
}
