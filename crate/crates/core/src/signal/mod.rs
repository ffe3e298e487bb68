//! Exact band-limited test functions, the sinc kernel and grid functions.

mod bandlimited;
mod grid;
mod kernel;

pub use bandlimited::{BandlimitedSignal, LocalizedSignalSpec};
pub use grid::{cumulative_simpson, Grid, GridFunction, Quadrature};
pub use kernel::{
    kernel_derivative, switch_radius, unit_sinc_closed, unit_sinc_series, KernelDerivativeTable,
    DEFAULT_MAX_ORDER,
};
