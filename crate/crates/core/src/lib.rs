//! Orbit-method machinery for Heisenberg and Jacobi groups.
//!
//! Lie-algebra identities are certified in exact rational arithmetic, group-level
//! geometry runs in `f64`. See the crate README for the JSON formats.

pub mod error;
pub mod heisenberg;
pub mod jacobi;
pub mod jacobi_forms;
pub mod linalg;
pub mod matrix;
pub mod par;
pub mod sampling;
pub mod scalar;
pub mod schrodinger;
pub mod sl2;
pub mod symplectic;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use par::ExecMode;
pub use scalar::{CRat, Rat, Scalar};
