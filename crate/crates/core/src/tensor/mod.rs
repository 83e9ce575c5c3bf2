//! Dense linear algebra over composite Hilbert spaces.

mod dims;
pub mod exchange;
mod matrix;
mod operator;
mod state;
pub(crate) mod trace;

pub use dims::SiteDims;
pub use matrix::{kron, kron_with_cap, ComplexMatrix, ONE, ZERO};
pub use operator::ProductOperator;
pub use state::{DensityMatrix, PureState};
pub use trace::{cross_trace, expectation, sandwich_trace};
pub(crate) use trace::product_expectation;
