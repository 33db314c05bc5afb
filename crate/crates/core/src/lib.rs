//! Chebyshev polynomials and Widom factors on compact sets in the complex
//! plane: logarithmic potential theory on finite unions of arcs and Jordan
//! curves, elliptic modular quantities for doubly connected domains, and
//! certified minimax polynomial computations.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod elliptic;
pub mod geometry;
pub mod potential;
pub mod chebyshev;
pub mod asymptotics;
pub mod cli;

pub use error::{Error, Result};
