//! Smallest eigenvalues of symmetric matrices.
//!
//! The sparse path runs Lanczos with full reorthogonalization on the
//! shift-inverted operator `(A - σI)^{-1}`, with `σ = 0` when `A` admits a
//! Cholesky factorization and `σ` a negative shift below the spectrum
//! otherwise. The largest Ritz value `θ` then gives `λ_min = σ + 1/θ`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::dense;
use super::skyline::{SkylineCholesky, SkylineMatrix};
use crate::error::{Error, Result};
use crate::forms::{combine, to_dense, SparseMatrix};

/// Relative asymmetry accepted before symmetrizing.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

const RESIDUAL_TOLERANCE: f64 = 1e-11;
const MAX_KRYLOV: usize = 400;
const START_SEED: u64 = 0x5eed;

/// `max |a_ij - a_ji| / max |a_ij|`.
pub fn relative_asymmetry(m: &SparseMatrix) -> f64 {
    let scale = m.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let t = m.transpose_view().to_csr();
    let diff = combine(m, 1.0, &t, -1.0);
    diff.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max) / scale
}

/// Checks symmetry and returns `(S + S^T) / 2`.
pub fn symmetrized(m: &SparseMatrix) -> Result<SparseMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    let asymmetry = relative_asymmetry(m);
    if asymmetry > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric {
            asymmetry,
            tolerance: SYMMETRY_TOLERANCE,
        });
    }
    let t = m.transpose_view().to_csr();
    Ok(combine(m, 0.5, &t, 0.5))
}

/// Smallest eigenvalue of a symmetric sparse matrix.
pub fn smallest_eigenvalue(m: &SparseMatrix) -> Result<f64> {
    let sym = symmetrized(m)?;
    if sym.rows() == 0 {
        return Err(Error::Dimension("empty matrix has no eigenvalues".into()));
    }
    let scale = sym.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let sky = SkylineMatrix::from_symmetric(&sym);
    let (shift, factor) = positive_shift_factor(&sky, scale)?;
    let theta = lanczos_largest(&factor)?;
    Ok(shift + 1.0 / theta)
}

/// Whether `m` is numerically positive definite (a Cholesky factorization
/// exists). Cheaper than [`smallest_eigenvalue`] and agrees with the sign
/// of its result away from zero.
pub fn is_positive_definite(m: &SparseMatrix) -> Result<bool> {
    let sym = symmetrized(m)?;
    Ok(SkylineMatrix::from_symmetric(&sym).cholesky(0.0).is_ok())
}

/// Finds `σ <= 0` such that `A - σI` is positive definite and returns its
/// factor. Negative shifts grow geometrically, so `-σ` overshoots
/// `-λ_min` by at most a factor of four.
fn positive_shift_factor(sky: &SkylineMatrix, scale: f64) -> Result<(f64, SkylineCholesky)> {
    if let Ok(f) = sky.cholesky(0.0) {
        return Ok((0.0, f));
    }
    let mut s = 1e-10 * scale;
    for _ in 0..80 {
        if let Ok(f) = sky.cholesky(s) {
            return Ok((-s, f));
        }
        s *= 4.0;
    }
    Err(Error::Eigensolver("no admissible shift found".into()))
}

/// Largest eigenvalue of the SPD operator `x -> factor.solve(x)`.
fn lanczos_largest(factor: &SkylineCholesky) -> Result<f64> {
    let n = factor.dim();
    let mut rng = StdRng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);

    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let max_k = n.min(MAX_KRYLOV);
    let mut theta = 0.0;

    for k in 0..max_k {
        let mut w = factor.solve(&v);
        let alpha = dot(&w, &v);
        axpy(-alpha, &v, &mut w);
        if let Some(prev) = basis.last() {
            axpy(-betas[k - 1], prev, &mut w);
        }
        basis.push(v);
        alphas.push(alpha);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                axpy(-c, q, &mut w);
            }
        }
        let beta = norm(&w);

        let (ritz, last_component) = top_ritz(&alphas, &betas);
        theta = ritz;
        let residual = (beta * last_component).abs();
        if residual <= RESIDUAL_TOLERANCE * theta.abs() || beta <= 1e-14 * theta.abs() || k + 1 == n {
            return Ok(theta);
        }
        betas.push(beta);
        v = w;
        v.iter_mut().for_each(|x| *x /= beta);
    }
    Err(Error::Eigensolver(format!(
        "Lanczos did not converge in {max_k} steps (last Ritz value {theta:.6e})"
    )))
}

/// Largest eigenvalue of the Lanczos tridiagonal matrix and the last
/// component of its eigenvector.
fn top_ritz(alphas: &[f64], betas: &[f64]) -> (f64, f64) {
    let k = alphas.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    (*val, eig.eigenvectors[(k - 1, idx)])
}

/// Dense route: all eigenvalues, smallest first. Used at small sizes and as
/// an oracle for the sparse path.
pub fn smallest_eigenvalue_dense(m: &SparseMatrix) -> Result<f64> {
    let sym = symmetrized(m)?;
    dense::symmetric_eigenvalues(&to_dense(&sym))
        .first()
        .copied()
        .ok_or_else(|| Error::Dimension("empty matrix has no eigenvalues".into()))
}

/// All eigenvalues of `S x = λ G x`, ascending.
pub fn generalized_eigenvalues(s: &SparseMatrix, g: &SparseMatrix) -> Result<Vec<f64>> {
    let s = symmetrized(s)?;
    let g = symmetrized(g)?;
    dense::generalized_eigenvalues(&to_dense(&s), &to_dense(&g))
}

/// Smallest `λ` with `S x = λ G x`, `G` SPD.
pub fn generalized_smallest_eigenvalue(s: &SparseMatrix, g: &SparseMatrix) -> Result<f64> {
    generalized_eigenvalues(s, g)?
        .first()
        .copied()
        .ok_or_else(|| Error::Dimension("empty matrix has no eigenvalues".into()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let nrm = norm(a);
    a.iter_mut().for_each(|x| *x /= nrm);
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
