//! Discrete inf-sup constant of a displacement/pressure pair.
//!
//! `β₁² = min q^T B K⁻¹ B^T q / q^T M q` over pressures outside the kernel
//! of `B^T`, with `K` the `H^1` Gram matrix on the free displacement dofs
//! and `M` the pressure mass matrix. A stable pair has an empty kernel; the
//! kernel dimension is reported so that spurious pressure modes are not
//! silently discarded.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::forms::{assemble_coupling, assemble_h1_gram, assemble_pressure_mass, mat_vec, restrict_columns, restrict_square, to_dense};
use crate::solvers::dense::generalized_eigenvalues;
use crate::solvers::skyline::SkylineMatrix;
use crate::spaces::{DisplacementElement, MixedSpace, Problem};

/// Generalized eigenvalues below this fraction of the largest are treated as
/// the kernel of `B^T`.
pub const KERNEL_TOLERANCE: f64 = 1e-10;

/// Dense pressure Schur complement `B K⁻¹ B^T`.
pub fn pressure_schur_complement(space: &MixedSpace) -> Result<DMatrix<f64>> {
    let k = restrict_square(space, &assemble_h1_gram(space));
    let b = restrict_columns(space, &assemble_coupling(space));
    let factor = SkylineMatrix::from_symmetric(&k)
        .cholesky(0.0)
        .map_err(|e| Error::NotPositiveDefinite(format!("H1 Gram matrix on free dofs ({e}); check constraints")))?;

    let np = b.rows();
    let bt = b.transpose_view().to_csr();
    let mut schur = DMatrix::zeros(np, np);
    let mut e = vec![0.0; np];
    for q in 0..np {
        e[q] = 1.0;
        let col = mat_vec(&bt, &e);
        e[q] = 0.0;
        let x = factor.solve(&col);
        let s = mat_vec(&b, &x);
        for (r, v) in s.into_iter().enumerate() {
            schur[(r, q)] = v;
        }
    }
    Ok((&schur + schur.transpose()) * 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfSupEstimate {
    /// Square root of the smallest generalized eigenvalue outside the kernel.
    pub beta: f64,
    /// Number of pressure modes `q` with `B^T q = 0` (up to
    /// [`KERNEL_TOLERANCE`]); these make the unrestricted constant zero.
    pub kernel_dim: usize,
}

/// Inf-sup estimate for an already built space.
pub fn estimate_inf_sup(space: &MixedSpace) -> Result<InfSupEstimate> {
    let schur = pressure_schur_complement(space)?;
    let mass = to_dense(&assemble_pressure_mass(space));
    let ev = generalized_eigenvalues(&schur, &mass)?;
    let top = ev.last().copied().unwrap_or(0.0);
    let kernel_dim = ev.iter().take_while(|v| **v <= KERNEL_TOLERANCE * top).count();
    let smallest = ev
        .get(kernel_dim)
        .copied()
        .ok_or_else(|| Error::Dimension("no pressure modes outside the kernel".into()))?;
    Ok(InfSupEstimate {
        beta: smallest.sqrt(),
        kernel_dim,
    })
}

/// Inf-sup estimate for `element` on an `n x n` mesh.
pub fn estimate_inf_sup_for(problem: Problem, nodes: usize, element: DisplacementElement) -> Result<InfSupEstimate> {
    let mesh = crate::mesh::build_structured_mesh(nodes)?;
    estimate_inf_sup(&MixedSpace::new(mesh, element, problem))
}
