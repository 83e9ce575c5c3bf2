//! Certifying that a multipartite state has fewer than k unentangled
//! particles, through two families of operator inequalities whose two-copy
//! traces are evaluated as products of single-copy traces.
//!
//! * [`tensor`]: dense complex matrices, product operators, density matrices
//!   and the factorized trace kernels.
//! * [`states`]: GHZ, qudit W and W̃ states, white-noise families and random
//!   ensembles with at least k unentangled particles.
//! * [`criteria`]: the inequality evaluators and probe presets.
//! * [`oracle`]: literal doubled-space evaluation for cross-checking.
//! * [`thresholds`]: bisection, closed forms and (p, q) boundary scans.
//!
//! Site 0 is the most significant Kronecker factor everywhere.

pub mod config;
pub mod criteria;
mod error;
pub mod oracle;
pub mod par;
pub mod states;
pub mod tensor;
pub mod thresholds;

pub use error::{Error, Result};
