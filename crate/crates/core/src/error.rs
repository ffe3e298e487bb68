use alloc::boxed::Box;
use alloc::string::String;

use crate::operators::IterationTrace;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("derivative order {order} exceeds the supported maximum {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("incompatible grids")]
    IncompatibleGrid,

    #[error("grid step {h} too coarse for bandwidth {sigma} (need h <= {limit})")]
    Resolution { h: f64, sigma: f64, limit: f64 },

    #[error("window too small: estimated tail fraction {tail:e} exceeds {tolerance:e}")]
    Window { tail: f64, tolerance: f64 },

    #[error("no sign change of the boundary determinant in [{lo}, {hi}]")]
    RootBracketing { lo: f64, hi: f64 },

    #[error("abscissae out of order: {left} must be smaller than {right}")]
    Ordering { left: f64, right: f64 },

    #[error("singular evaluation: base coincides with pole at {0}")]
    Singularity(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sample data error: {0}")]
    Data(String),

    #[error("empty sampling set: {0}")]
    EmptySet(String),

    #[error("degenerate frame bounds: lower bound is zero")]
    DegenerateBounds,

    #[error("iteration diverged after {} steps", .0.steps.len())]
    Divergence(Box<IterationTrace>),
}
