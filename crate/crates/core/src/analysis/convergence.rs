//! Manufactured-solution convergence studies.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::{assemble_load, AssembledSystem};
use crate::solvers::{smallest_eigenvalue, solve_saddle, SaddleSystem};
use crate::spaces::basis::ElementGeometry;
use crate::spaces::quadrature::{make_quadrature, ERROR_DEGREE};
use crate::spaces::MixedSpace;

use super::config::ProblemConfig;

/// Analytic displacement and pressure fields.
pub trait ExactSolution: Sync {
    fn displacement(&self, x: f64, y: f64) -> [f64; 2];
    /// `[[∂x w1, ∂y w1], [∂x w2, ∂y w2]]`.
    fn displacement_gradient(&self, x: f64, y: f64) -> [[f64; 2]; 2];
    fn pressure(&self, x: f64, y: f64) -> f64;
    /// Body force `f`; the discrete right-hand side is `δγ ∫ f·v`.
    fn load(&self, x: f64, y: f64) -> [f64; 2];
}

/// `w = 0`, `p = δγ e^x (1 - y)` for the load `f = (-e^x (1 - y), e^x)`.
#[derive(Debug, Clone, Copy)]
pub struct Manufactured {
    pub delta_gamma: f64,
}

impl ExactSolution for Manufactured {
    fn displacement(&self, _x: f64, _y: f64) -> [f64; 2] {
        [0.0, 0.0]
    }

    fn displacement_gradient(&self, _x: f64, _y: f64) -> [[f64; 2]; 2] {
        [[0.0; 2]; 2]
    }

    fn pressure(&self, x: f64, y: f64) -> f64 {
        self.delta_gamma * x.exp() * (1.0 - y)
    }

    fn load(&self, x: f64, y: f64) -> [f64; 2] {
        [-x.exp() * (1.0 - y), x.exp()]
    }
}

/// Discretization errors of one solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `‖p - p_h‖₀`.
    pub pressure_l2: f64,
    /// `‖w - w_h‖₁` of the full MINI field.
    pub displacement_h1: f64,
    /// `‖w - w_h‖₁` with the bubble coefficients of `w_h` dropped.
    pub displacement_h1_linear: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub nodes: usize,
    /// `‖p - p_h‖₀`.
    pub err_p_l2: f64,
    /// `‖w - w_h‖₁`, bubbles included.
    pub err_w_h1: f64,
    /// `‖w - w_h‖₁` of the vertex (P1) part of `w_h`.
    pub err_w_h1_linear: f64,
    /// `log2` of the pressure-error ratio to the previous row.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

/// Pressure `L²` and displacement `H¹` errors of a discrete solution, by
/// element-wise quadrature of degree 10. `w_free` holds free-dof
/// coefficients, `p` nodal pressure values.
pub fn compute_errors<E: ExactSolution + ?Sized>(
    space: &MixedSpace,
    w_free: &[f64],
    p: &[f64],
    exact: &E,
) -> Result<ErrorNorms> {
    if w_free.len() != space.num_free_dofs() || p.len() != space.num_pressure_dofs() {
        return Err(Error::Dimension(format!(
            "solution sizes {}/{} do not match space {}/{}",
            w_free.len(),
            p.len(),
            space.num_free_dofs(),
            space.num_pressure_dofs()
        )));
    }
    let rule = make_quadrature(ERROR_DEGREE)?;
    let w = space.expand(w_free);
    let mesh = space.mesh();
    let with_bubble = space.element().has_bubble();
    let ns = space.element().shapes_per_triangle();
    let (mut ep, mut ew, mut ew_lin) = (0.0, 0.0, 0.0);

    for t in 0..mesh.num_triangles() {
        let geo = ElementGeometry::new(mesh.vertices(t));
        let dofs = space.displacement_dof_map(t);
        let pdofs = space.pressure_dof_map(t);
        for (l, wq) in rule.iter() {
            let dx = 2.0 * geo.area * wq;
            let [x, y] = geo.point(l);
            let (values, grads) = geo.shape(l, with_bubble);

            let ph: f64 = (0..3).map(|k| p[pdofs[k]] * l[k]).sum();
            ep += dx * (exact.pressure(x, y) - ph).powi(2);

            let we = exact.displacement(x, y);
            let ge = exact.displacement_gradient(x, y);
            for c in 0..2 {
                let mut val = 0.0;
                let mut grad = [0.0; 2];
                let sq = |val: f64, grad: [f64; 2]| {
                    (we[c] - val).powi(2) + (ge[c][0] - grad[0]).powi(2) + (ge[c][1] - grad[1]).powi(2)
                };
                for a in 0..ns {
                    let coef = w[dofs[c * ns + a]];
                    val += coef * values[a];
                    grad[0] += coef * grads[a][0];
                    grad[1] += coef * grads[a][1];
                    if a == 2 {
                        ew_lin += dx * sq(val, grad);
                    }
                }
                ew += dx * sq(val, grad);
            }
        }
    }
    Ok(ErrorNorms {
        pressure_l2: ep.sqrt(),
        displacement_h1: ew.sqrt(),
        displacement_h1_linear: ew_lin.sqrt(),
    })
}

/// Solution of the stabilized mixed system on one space.
#[derive(Debug, Clone)]
pub struct StabilizedSolution {
    pub displacement: Vec<f64>,
    pub pressure: Vec<f64>,
    pub lambda_min: f64,
    pub relative_residual: f64,
}

/// Solves the stabilized system at `cfg.gamma_tilde` with load `δγ f`,
/// refusing loads where the stabilized block is not positive definite.
pub fn solve_stabilized<E: ExactSolution + ?Sized>(
    cfg: &ProblemConfig,
    space: &MixedSpace,
    ops: &AssembledSystem,
    exact: &E,
) -> Result<StabilizedSolution> {
    let a = ops.stabilized(cfg.mu, cfg.gamma(), cfg.stabilization_at(cfg.gamma_tilde));
    let lambda_min = smallest_eigenvalue(&a)?;
    if !(lambda_min > 0.0) {
        return Err(Error::Unstable {
            nodes: space.mesh().nodes_per_side(),
            gamma_tilde: cfg.gamma_tilde,
            lambda_min,
        });
    }
    let sys = SaddleSystem {
        a,
        b: ops.coupling.clone(),
        rhs_u: assemble_load(space, |x, y| exact.load(x, y), cfg.delta_gamma),
        rhs_p: vec![0.0; space.num_pressure_dofs()],
    };
    let sol = solve_saddle(&sys)?;
    Ok(StabilizedSolution {
        displacement: sol.displacement,
        pressure: sol.pressure,
        lambda_min,
        relative_residual: sol.relative_residual,
    })
}

/// Errors on each mesh in `meshes` (solved independently, reported in the
/// given order) with observed pressure orders.
pub fn run_convergence(cfg: &ProblemConfig, meshes: &[usize]) -> Result<ConvergenceTable> {
    cfg.validate()?;
    let exact = Manufactured {
        delta_gamma: cfg.delta_gamma,
    };
    let errors: Vec<(usize, ErrorNorms)> = meshes
        .par_iter()
        .map(|&n| {
            let space = MixedSpace::mini(n, cfg.problem)?;
            let ops = AssembledSystem::assemble(&space);
            let sol = solve_stabilized(cfg, &space, &ops, &exact)?;
            let norms = compute_errors(&space, &sol.displacement, &sol.pressure, &exact)?;
            Ok((n, norms))
        })
        .collect::<Result<_>>()?;
    Ok(table_from_errors(&errors))
}

/// Builds rows from per-mesh errors, with orders assuming each mesh halves
/// the previous mesh size.
pub fn table_from_errors(errors: &[(usize, ErrorNorms)]) -> ConvergenceTable {
    let rows = errors
        .iter()
        .enumerate()
        .map(|(i, (nodes, e))| ConvergenceRow {
            nodes: *nodes,
            err_p_l2: e.pressure_l2,
            err_w_h1: e.displacement_h1,
            err_w_h1_linear: e.displacement_h1_linear,
            order: (i > 0).then(|| (errors[i - 1].1.pressure_l2 / e.pressure_l2).log2()),
        })
        .collect();
    ConvergenceTable { rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norms(p: f64) -> ErrorNorms {
        ErrorNorms {
            pressure_l2: p,
            displacement_h1: p / 10.0,
            displacement_h1_linear: p / 20.0,
        }
    }

    #[test]
    fn orders_from_successive_errors() {
        let table = table_from_errors(&[(5, norms(1.0)), (9, norms(0.25)), (17, norms(0.125))]);
        let orders: Vec<_> = table.rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, vec![None, Some(2.0), Some(1.0)]);
        assert_eq!(table.rows[1].err_w_h1_linear, 0.0125);
        assert!(table_from_errors(&[]).rows.is_empty());
    }

    #[test]
    fn manufactured_fields() {
        let m = Manufactured { delta_gamma: 2.0 };
        assert_eq!(m.pressure(0.0, 0.0), 2.0);
        assert_eq!(m.pressure(0.3, 1.0), 0.0);
        assert_eq!(m.load(0.0, 1.0), [0.0, 1.0]);
        assert_eq!(m.displacement(0.5, 0.5), [0.0, 0.0]);
    }

    #[test]
    fn refuses_unstable_load() {
        let cfg = ProblemConfig::new(crate::spaces::Problem::Clamped, 9).classical().with_gamma_tilde(2.0);
        let err = run_convergence(&cfg, &[9]).unwrap_err();
        assert!(matches!(err, Error::Unstable { nodes: 9, .. }));
    }
}
