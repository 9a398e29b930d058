//! Formal WKB operator calculus on a chart of `T*C^n`.
//!
//! Operators are represented by their total symbols ([`WkbSymbol`]) and
//! composed with the Leibniz product. [`HalfFormOperator`] carries the
//! half-density needed for the globally coherent adjoint.

mod halfform;
mod symbol;

pub use halfform::{HalfFormJson, HalfFormOperator};
pub use symbol::{WkbSymbol, WkbSymbolJson};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WkbError {
    #[error("operator is zero")]
    ZeroOperator,
    #[error("operator of order {order} is not in F_{m}")]
    OrderTooHigh { order: i64, m: i64 },
    #[error("order {m} lies below the truncation floor {floor}")]
    BelowTruncation { m: i64, floor: i64 },
    #[error("chart dimensions differ ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("principal symbol is not a unit")]
    NotInvertible,
    #[error("half-density must be a nonzero function of x")]
    InvalidDensity,
    #[error("depth must be positive")]
    ZeroDepth,
    #[error("exponent {exp} lies outside the window [{floor}, {top}]")]
    OutOfWindow { exp: i64, floor: i64, top: i64 },
    #[error("star exponential needs an argument of negative order")]
    ExpNeedsNegativeOrder,
    #[error("malformed symbol: {0}")]
    Malformed(String),
}

#[cfg(test)]
mod tests;
