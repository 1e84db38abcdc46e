//! Exact scalar and matrix arithmetic over the Gaussian rationals.

pub mod jordan;
pub mod matrix;
pub mod scalar;

pub use jordan::{
    jordan_basis, jordan_cell, jordan_model, jordan_sum, nilpotent_profile, similarity_witness,
    JordanDecomposition,
};
pub use matrix::Matrix;
pub use scalar::Scalar;
