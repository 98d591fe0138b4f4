//! Stability and accuracy studies of the stabilized discretization.

pub mod config;
pub mod constants;
pub mod convergence;
pub mod infsup;
pub mod stability;

pub use config::{stabilization_parameter, ProblemConfig};
pub use constants::{compute_m0, AbstractConstants};
pub use convergence::{
    compute_errors, run_convergence, solve_stabilized, table_from_errors, ConvergenceRow, ConvergenceTable, ErrorNorms,
    ExactSolution, Manufactured, StabilizedSolution,
};
pub use infsup::{estimate_inf_sup, estimate_inf_sup_for, InfSupEstimate};
pub use stability::{find_stability_limits, is_stable, StabilityProbe, StabilityReport, StabilityVerdict};
