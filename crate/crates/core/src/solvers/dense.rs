//! Dense symmetric eigenvalue helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix};

use crate::error::{Error, Result};

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenvalues of `S x = λ G x` for symmetric `S` and SPD `G`, ascending,
/// through the reduction `L^{-1} S L^{-T}` with `G = L L^T`.
pub fn generalized_eigenvalues(s: &DMatrix<f64>, g: &DMatrix<f64>) -> Result<Vec<f64>> {
    if s.shape() != g.shape() || !s.is_square() {
        return Err(Error::Dimension(format!(
            "generalized eigenproblem needs equal square matrices, got {:?} and {:?}",
            s.shape(),
            g.shape()
        )));
    }
    let gs = (g + g.transpose()) * 0.5;
    let chol = Cholesky::new(gs)
        .ok_or_else(|| Error::NotPositiveDefinite("metric matrix of generalized eigenproblem".into()))?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(s)
        .ok_or_else(|| Error::Eigensolver("triangular solve failed".into()))?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Eigensolver("triangular solve failed".into()))?;
    Ok(symmetric_eigenvalues(&c))
}
