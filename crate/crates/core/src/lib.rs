//! Exact construction of p-th roots of nilpotent matrices, the adjacency graph
//! of their Jordan profiles, and explicit certified paths between any two
//! p-th roots of the same nilpotent matrix.
//!
//! All arithmetic is exact over the Gaussian rationals; no floating point is
//! used anywhere.

pub mod certify;
pub mod criteria;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod path;
pub mod profile;

pub use error::{Error, Result};
pub use linalg::{Matrix, Scalar};
pub use profile::{AdjacencyMove, Direction, Profile};
