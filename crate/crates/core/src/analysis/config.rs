use crate::error::{Error, Result};
use crate::spaces::Problem;

/// Shear modulus of the reference experiments.
pub const DEFAULT_MU: f64 = 40.0;
/// Linear stabilization coefficient, both problems.
pub const DEFAULT_M1: f64 = 320.0;
/// Quadratic stabilization coefficient for the clamped problem.
pub const DEFAULT_M2_CLAMPED: f64 = 0.0;
/// Quadratic stabilization coefficient for the normal-only problem.
pub const DEFAULT_M2_NORMAL_ONLY: f64 = 1.36;
pub const DEFAULT_DELTA_GAMMA: f64 = 1.0;
pub const DEFAULT_SCAN_STEP: f64 = 0.25;
pub const DEFAULT_BISECT_TOL: f64 = 0.01;
/// Loads beyond this magnitude without a negative eigenvalue count as infinite.
pub const DEFAULT_GAMMA_CAP: f64 = 1e6;
/// Past this magnitude the outward scan doubles the load at every probe.
pub const DEFAULT_LINEAR_SCAN_LIMIT: f64 = 32.0;
/// Characteristic length in `γ̃ = γ L / μ`.
pub const CHARACTERISTIC_LENGTH: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub problem: Problem,
    /// Nodes per side of the structured mesh.
    pub nodes: usize,
    pub mu: f64,
    /// Nondimensional load `γ̃`.
    pub gamma_tilde: f64,
    pub m1: f64,
    pub m2: f64,
    /// Load increment scaling the right-hand side of the linear solve.
    pub delta_gamma: f64,
    pub scan_step: f64,
    pub bisect_tol: f64,
    pub gamma_cap: f64,
    pub linear_scan_limit: f64,
    /// Drop the stabilization (`M ≡ 0`).
    pub classical: bool,
}

impl ProblemConfig {
    /// Defaults of the reference experiments for `problem` on an `n x n` mesh.
    pub fn new(problem: Problem, nodes: usize) -> Self {
        let m2 = match problem {
            Problem::Clamped => DEFAULT_M2_CLAMPED,
            Problem::NormalOnly => DEFAULT_M2_NORMAL_ONLY,
        };
        ProblemConfig {
            problem,
            nodes,
            mu: DEFAULT_MU,
            gamma_tilde: 0.0,
            m1: DEFAULT_M1,
            m2,
            delta_gamma: DEFAULT_DELTA_GAMMA,
            scan_step: DEFAULT_SCAN_STEP,
            bisect_tol: DEFAULT_BISECT_TOL,
            gamma_cap: DEFAULT_GAMMA_CAP,
            linear_scan_limit: DEFAULT_LINEAR_SCAN_LIMIT,
            classical: false,
        }
    }

    pub fn with_gamma_tilde(mut self, gamma_tilde: f64) -> Self {
        self.gamma_tilde = gamma_tilde;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn classical(mut self) -> Self {
        self.classical = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| Err(Error::Parameter(format!("{what} = {v}")));
        if self.nodes < 2 {
            return Err(Error::InvalidResolution(self.nodes));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return bad("mu must be positive", self.mu);
        }
        if !(self.m1 >= 0.0) {
            return bad("m1 must be nonnegative", self.m1);
        }
        if !(self.m2 >= 0.0) {
            return bad("m2 must be nonnegative", self.m2);
        }
        if !(self.gamma_cap > 0.0) {
            return bad("gamma cap must be positive", self.gamma_cap);
        }
        if !(self.bisect_tol > 0.0) {
            return bad("bisection tolerance must be positive", self.bisect_tol);
        }
        if !(self.scan_step > 0.0) {
            return bad("scan step must be positive", self.scan_step);
        }
        if !self.gamma_tilde.is_finite() {
            return bad("gamma tilde must be finite", self.gamma_tilde);
        }
        Ok(())
    }

    /// Dimensional load `γ = μ γ̃ / L` for a given `γ̃`.
    pub fn gamma_at(&self, gamma_tilde: f64) -> f64 {
        self.mu * gamma_tilde / CHARACTERISTIC_LENGTH
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_at(self.gamma_tilde)
    }

    /// `M(γ) = m1 |γ̃| + m2 γ̃²`, or zero for the classical method.
    pub fn stabilization_at(&self, gamma_tilde: f64) -> f64 {
        if self.classical {
            0.0
        } else {
            self.m1 * gamma_tilde.abs() + self.m2 * gamma_tilde * gamma_tilde
        }
    }
}

/// `M(γ)` at the configured load.
pub fn stabilization_parameter(cfg: &ProblemConfig) -> f64 {
    cfg.stabilization_at(cfg.gamma_tilde)
}
