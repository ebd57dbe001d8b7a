use thiserror::Error;

#[derive(Debug, Error)]
pub enum HopperError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no valid seed polytope after {0} attempts")]
    SeedingFailed(usize),
    #[error(transparent)]
    Core(#[from] hopper_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = HopperError> = std::result::Result<T, E>;
