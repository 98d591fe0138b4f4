//! Div-div stabilized mixed finite elements for linearized incompressible
//! elasticity on the square `(-1,1)^2`.
//!
//! The crate assembles the MINI element (P1 + cubic bubble displacements,
//! continuous P1 pressure) for two model problems, adds a weighted
//! `M ∫ div w div v` term to the displacement block, and provides the
//! machinery to study the resulting discretization: critical-load detection
//! through the smallest eigenvalue of the stabilized block, discrete inf-sup
//! estimation and manufactured-solution convergence studies.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod forms;
pub mod mesh;
pub mod solvers;
pub mod spaces;

pub use error::{Error, Result};
