//! Critical-load detection from the smallest eigenvalue of the stabilized
//! displacement block.

use crate::error::{Error, Result};
use crate::forms::{AssembledSystem, SparseMatrix};
use crate::solvers::smallest_eigenvalue;
use crate::spaces::{MixedSpace, Problem};

use super::config::ProblemConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub lambda_min: f64,
    pub stable: bool,
}

/// Critical loads of one `(problem, mesh)` pair. Unbounded limits are
/// `±∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub problem: Problem,
    pub nodes: usize,
    /// Lower critical load `γ̃_m` (or `-∞`).
    pub gamma_m: f64,
    /// Upper critical load `γ̃_M` (or `+∞`).
    pub gamma_max: f64,
    /// Every probed `(γ̃, λ_min)`, in probing order.
    pub trace: Vec<(f64, f64)>,
}

/// Operators of one space, assembled once and re-weighted per load.
#[derive(Debug, Clone)]
pub struct StabilityProbe {
    space: MixedSpace,
    ops: AssembledSystem,
}

impl StabilityProbe {
    pub fn new(problem: Problem, nodes: usize) -> Result<Self> {
        Ok(Self::from_space(MixedSpace::mini(nodes, problem)?))
    }

    pub fn from_space(space: MixedSpace) -> Self {
        let ops = AssembledSystem::assemble(&space);
        StabilityProbe { space, ops }
    }

    pub fn space(&self) -> &MixedSpace {
        &self.space
    }

    pub fn operators(&self) -> &AssembledSystem {
        &self.ops
    }

    /// `A_elastic(μ, μγ̃) + M(γ̃) S_divdiv` on the free dofs.
    pub fn stabilized_block(&self, cfg: &ProblemConfig, gamma_tilde: f64) -> SparseMatrix {
        self.ops.stabilized(
            cfg.mu,
            cfg.gamma_at(gamma_tilde),
            cfg.stabilization_at(gamma_tilde),
        )
    }

    pub fn verdict(&self, cfg: &ProblemConfig, gamma_tilde: f64) -> Result<StabilityVerdict> {
        let lambda_min = smallest_eigenvalue(&self.stabilized_block(cfg, gamma_tilde))?;
        Ok(StabilityVerdict {
            lambda_min,
            stable: lambda_min > 0.0,
        })
    }

    /// Scans outward from zero load and bisects the first sign change in
    /// each direction.
    pub fn limits(&self, cfg: &ProblemConfig) -> Result<StabilityReport> {
        cfg.validate()?;
        let mut trace = Vec::new();
        let base = self.verdict(cfg, 0.0)?;
        trace.push((0.0, base.lambda_min));
        if !base.stable {
            return Err(Error::BaselineUnstable {
                lambda_min: base.lambda_min,
            });
        }
        let gamma_max = self.directional_limit(cfg, 1.0, &mut trace)?;
        let gamma_m = self.directional_limit(cfg, -1.0, &mut trace)?;
        Ok(StabilityReport {
            problem: self.space.problem(),
            nodes: self.space.mesh().nodes_per_side(),
            gamma_m,
            gamma_max,
            trace,
        })
    }

    fn directional_limit(&self, cfg: &ProblemConfig, sign: f64, trace: &mut Vec<(f64, f64)>) -> Result<f64> {
        let mut stable_at = 0.0_f64;
        let mut k = 0_u64;
        loop {
            let next = if stable_at < cfg.linear_scan_limit {
                k += 1;
                (k as f64 * cfg.scan_step).min(cfg.gamma_cap)
            } else {
                (2.0 * stable_at).min(cfg.gamma_cap)
            };
            let v = self.verdict(cfg, sign * next)?;
            trace.push((sign * next, v.lambda_min));
            if !v.stable {
                return self.bisect(cfg, sign, stable_at, next, trace);
            }
            if next >= cfg.gamma_cap {
                return Ok(sign * f64::INFINITY);
            }
            stable_at = next;
        }
    }

    /// Narrows `[stable, unstable]` (load magnitudes) to `bisect_tol` and
    /// returns the signed midpoint.
    fn bisect(
        &self,
        cfg: &ProblemConfig,
        sign: f64,
        mut stable: f64,
        mut unstable: f64,
        trace: &mut Vec<(f64, f64)>,
    ) -> Result<f64> {
        while unstable - stable > cfg.bisect_tol {
            let mid = 0.5 * (stable + unstable);
            let v = self.verdict(cfg, sign * mid)?;
            trace.push((sign * mid, v.lambda_min));
            if v.stable {
                stable = mid;
            } else {
                unstable = mid;
            }
        }
        Ok(sign * 0.5 * (stable + unstable))
    }
}

/// Smallest eigenvalue of the stabilized block at `cfg.gamma_tilde`.
pub fn is_stable(cfg: &ProblemConfig) -> Result<StabilityVerdict> {
    cfg.validate()?;
    StabilityProbe::new(cfg.problem, cfg.nodes)?.verdict(cfg, cfg.gamma_tilde)
}

/// Critical loads `(γ̃_m, γ̃_M)` for `cfg.problem` on a `cfg.nodes` mesh.
pub fn find_stability_limits(cfg: &ProblemConfig) -> Result<StabilityReport> {
    cfg.validate()?;
    StabilityProbe::new(cfg.problem, cfg.nodes)?.limits(cfg)
}
