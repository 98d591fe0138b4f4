//! Desk-scale direct solvers and symmetric eigen-analysis.
//!
//! Sparse matrices are reordered with reverse Cuthill-McKee and factored in
//! envelope (skyline) or band storage; on the structured meshes used here
//! the profile stays within a few grid rows of dofs, so factorizations of
//! the finest systems take a fraction of a second.

pub mod banded;
pub mod dense;
pub mod eigen;
pub mod ordering;
pub mod saddle;
pub mod skyline;

pub use eigen::{generalized_eigenvalues, generalized_smallest_eigenvalue, smallest_eigenvalue};
pub use saddle::{solve_saddle, SaddleSolution, SaddleSystem};
