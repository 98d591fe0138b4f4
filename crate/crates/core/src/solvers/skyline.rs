//! Envelope (skyline) Cholesky factorization of symmetric matrices.

use crate::error::{Error, Result};
use crate::forms::SparseMatrix;

use super::ordering::{adjacency, invert, reverse_cuthill_mckee};

/// Lower envelope of a symmetric matrix in a bandwidth-reducing ordering.
#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    perm: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of each row's storage; row `i` holds columns `first[i]..=i`.
    start: Vec<usize>,
    values: Vec<f64>,
}

impl SkylineMatrix {
    /// Copies the lower triangle of `m` (assumed symmetric) into envelope
    /// storage under a reverse Cuthill-McKee ordering.
    pub fn from_symmetric(m: &SparseMatrix) -> Self {
        let n = m.rows();
        let perm = reverse_cuthill_mckee(&adjacency(m));
        let inv = invert(&perm);

        let mut first: Vec<usize> = (0..n).collect();
        for (_, (i, j)) in m.iter() {
            let (a, b) = (inv[i], inv[j]);
            let (row, col) = if a >= b { (a, b) } else { (b, a) };
            first[row] = first[row].min(col);
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for (i, f) in first.iter().enumerate() {
            start.push(total);
            total += i - f + 1;
        }
        start.push(total);

        let mut values = vec![0.0; total];
        for (v, (i, j)) in m.iter() {
            let (a, b) = (inv[i], inv[j]);
            if a >= b {
                values[start[a] + b - first[a]] += *v;
            }
        }
        SkylineMatrix {
            perm,
            first,
            start,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Stored entries in the envelope.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    /// Cholesky factor of `self + shift * I`. Fails exactly when a pivot is
    /// not positive, i.e. when the shifted matrix is not (numerically)
    /// positive definite.
    pub fn cholesky(&self, shift: f64) -> Result<SkylineCholesky> {
        let n = self.dim();
        let first = &self.first;
        let start = &self.start;
        let mut l = self.values.clone();
        if shift != 0.0 {
            for i in 0..n {
                l[start[i] + i - first[i]] += shift;
            }
        }
        for i in 0..n {
            let fi = first[i];
            let ri = start[i];
            for j in fi..i {
                let fj = first[j];
                let rj = start[j];
                let k0 = fi.max(fj);
                let mut s = l[ri + j - fi];
                let a = &l[ri + k0 - fi..ri + j - fi];
                let b = &l[rj + k0 - fj..rj + j - fj];
                s -= dot(a, b);
                l[ri + j - fi] = s / l[rj + j - fj];
            }
            let row = &l[ri..ri + i - fi];
            let d = l[ri + i - fi] - dot(row, row);
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::NotPositiveDefinite(format!(
                    "pivot {d:.3e} at row {i} of {n} (shift {shift:.3e})"
                )));
            }
            l[ri + i - fi] = d.sqrt();
        }
        Ok(SkylineCholesky {
            perm: self.perm.clone(),
            first: self.first.clone(),
            start: self.start.clone(),
            l,
        })
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    l: Vec<f64>,
}

impl SkylineCholesky {
    pub fn dim(&self) -> usize {
        self.first.len()
    }

    /// Solves `(A + shift I) x = b` in the original ordering.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut y: Vec<f64> = self.perm.iter().map(|old| b[*old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let ri = self.start[i];
            let s = y[i] - dot(&self.l[ri..ri + i - fi], &y[fi..i]);
            y[i] = s / self.l[ri + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let ri = self.start[i];
            y[i] /= self.l[ri + i - fi];
            let xi = y[i];
            for (k, lik) in (fi..i).zip(&self.l[ri..ri + i - fi]) {
                y[k] -= lik * xi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, old) in self.perm.iter().enumerate() {
            x[*old] = y[new];
        }
        x
    }
}
