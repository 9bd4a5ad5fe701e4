//! Time grid, source and detector kernels, and discrete mode functions.

mod grid;
mod jitter;
mod mode;
mod source;
pub mod units;

pub use grid::TimeGrid;
pub use jitter::{JitterKernel, JitterShape};
pub use mode::{mode_overlap, DiscreteMode};
pub(crate) use source::envelope;
pub use source::SourceKernel;
