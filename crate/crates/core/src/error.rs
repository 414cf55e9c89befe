use thiserror::Error;

/// Errors produced by the arithmetic, group and geometry routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid radix {0}: must be at least 2")]
    InvalidRadix(String),
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(String),
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("sequence has not stabilized modulo r^{precision}")]
    NotCauchy { precision: u32 },
    #[error("group of order {order} exceeds the enumeration cap {cap}")]
    TooLarge { order: u128, cap: u64 },
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("element is not a coherent sequence")]
    NotCoherent,
    #[error("level {level} is out of range for depth {depth}")]
    Level { level: u32, depth: u32 },
    #[error("insufficient resolution: depth {0} must be at least 3")]
    InsufficientResolution(u32),
    #[error("no feasible path found (best endpoint error {penalty:e})")]
    NoFeasiblePath { penalty: f64 },
    #[error("dilation by zero is not invertible")]
    NonInvertible,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
