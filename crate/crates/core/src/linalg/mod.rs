//! Exact scalars and dense matrices with rank, kernel and solve.

mod matrix;
mod scalar;

pub use matrix::{Echelon, Matrix};
pub use scalar::{Field, Scalar};
