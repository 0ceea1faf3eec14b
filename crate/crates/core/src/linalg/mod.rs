//! Matrix-level algorithms: Pfaffian, exponential and SPD logarithm, Jordan
//! decomposition and element classification.

mod expm;
mod jordan;
mod pfaffian;

pub use expm::{matrix_exp, matrix_log_spd, matrix_sqrt_spd, spd_eigen};
pub use jordan::{classify_element, eigenvalues, jordan_decompose, ElementClass, JordanParts};
pub use pfaffian::{pfaffian, pfaffian_generic};
