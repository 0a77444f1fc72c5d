//! Numerical compactness diagnostics for function spaces with continuous
//! Parseval frames: tail-mass functionals over exhaustions, Besov-Sobolev
//! tails, Berezin transforms and singular-value tails of Toeplitz and
//! little Hankel operators, and the classical `L²(ℝ)` criteria.
//!
//! Data-parallel loops run on rayon when the default `parallel` feature is
//! enabled and sequentially otherwise; reductions are pairwise so results
//! do not depend on the thread count.

// `!(x > 0.0)` style checks reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod numerics;
pub mod spaces;
pub mod besov;
pub mod frames;
pub mod operators;
pub mod euclid;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
