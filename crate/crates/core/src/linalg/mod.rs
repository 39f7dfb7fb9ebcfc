//! Exact linear algebra over `Z`, `Q` and `F_p`: Smith normal form, ranks,
//! kernels, homology of a pair of composable boundary matrices, and a sparse
//! unit-pivot reducer for large chain complexes.
//!
//! All operations are pure and allocate their results; nothing here holds
//! shared mutable state, so values may be used freely across threads.

mod abgroup;
mod coeff;
pub mod field;
mod matrix;
mod snf;
pub mod solve;
pub mod sparse;

pub use abgroup::{homology_at, AbGroupClass, LinalgError};
pub use coeff::{CoeffError, Coefficients};
pub use matrix::IntMatrix;
pub use snf::{rank, smith_normal_form, SnfDecomposition};
