//! Exact linear algebra for finite-dimensional Rota-Baxter systems.

pub mod algebra;
pub mod bimodule;
pub mod cohomology;
pub mod deformation;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod samples;
pub mod system;
pub mod verdict;

pub use error::{Error, Result};
pub use linalg::{Field, Matrix, Scalar};
