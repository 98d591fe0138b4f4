//! Band LU factorization with partial pivoting for general square systems.

use crate::error::{Error, Result};
use crate::forms::SparseMatrix;

use super::ordering::{adjacency, invert, reverse_cuthill_mckee};

#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage; entry `(i, j)` lives at `i * width + j + kl - i`.
    band: Vec<f64>,
    pivots: Vec<usize>,
    perm: Vec<usize>,
}

impl BandedLu {
    /// Factors `m` after a symmetric reverse Cuthill-McKee reordering of its
    /// pattern. `name` identifies the system in error messages.
    pub fn factor(m: &SparseMatrix, name: &str) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::Dimension(format!("{name}: {}x{} is not square", n, m.cols())));
        }
        let perm = reverse_cuthill_mckee(&adjacency(m));
        let inv = invert(&perm);
        let (mut kl, mut ku) = (0, 0);
        for (_, (i, j)) in m.iter() {
            let (a, b) = (inv[i], inv[j]);
            if a > b {
                kl = kl.max(a - b);
            } else {
                ku = ku.max(b - a);
            }
        }
        let width = 2 * kl + ku + 1;
        let mut band = vec![0.0; n * width];
        let mut scale: f64 = 0.0;
        for (v, (i, j)) in m.iter() {
            let (a, b) = (inv[i], inv[j]);
            band[a * width + b + kl - a] += *v;
            scale = scale.max(v.abs());
        }

        let mut pivots = vec![0; n];
        let tiny = scale * f64::EPSILON * 16.0;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let mut p = k;
            let mut best = band[k * width + kl].abs();
            for i in k + 1..=last_row {
                let v = band[i * width + k + kl - i].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > tiny) {
                return Err(Error::Singular {
                    system: name.to_string(),
                    pivot: k,
                });
            }
            pivots[k] = p;
            if p != k {
                for j in k..=last_col {
                    band.swap(k * width + j + kl - k, p * width + j + kl - p);
                }
            }
            let pivot = band[k * width + kl];
            for i in k + 1..=last_row {
                let ik = i * width + k + kl - i;
                let l = band[ik] / pivot;
                band[ik] = l;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..=last_col {
                    let u = band[k * width + j + kl - k];
                    band[i * width + j + kl - i] -= l * u;
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            band,
            pivots,
            perm,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Lower and upper bandwidth of the reordered matrix.
    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let width = 2 * kl + ku + 1;
        let mut y: Vec<f64> = self.perm.iter().map(|old| b[*old]).collect();
        for k in 0..n {
            y.swap(k, self.pivots[k]);
            let yk = y[k];
            for i in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                y[i] -= self.band[i * width + k + kl - i] * yk;
            }
        }
        for k in (0..n).rev() {
            let mut s = y[k];
            for j in k + 1..=(k + kl + ku).min(n - 1) {
                s -= self.band[k * width + j + kl - k] * y[j];
            }
            y[k] = s / self.band[k * width + kl];
        }
        let mut x = vec![0.0; n];
        for (new, old) in self.perm.iter().enumerate() {
            x[*old] = y[new];
        }
        x
    }
}
