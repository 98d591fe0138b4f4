//! Direct solution of `[[A, B^T], [B, 0]] (u, p) = (f, g)`.

use sprs::TriMat;

use super::banded::BandedLu;
use crate::error::{Error, Result};
use crate::forms::{mat_t_vec, mat_vec, SparseMatrix};

/// Relative block residual every solve must reach.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SaddleSystem {
    /// Symmetric displacement block.
    pub a: SparseMatrix,
    /// Coupling block, pressure rows by displacement columns.
    pub b: SparseMatrix,
    pub rhs_u: Vec<f64>,
    pub rhs_p: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SaddleSolution {
    pub displacement: Vec<f64>,
    pub pressure: Vec<f64>,
    /// `‖K x - rhs‖ / ‖rhs‖` (absolute when the right-hand side vanishes).
    pub relative_residual: f64,
}

impl SaddleSystem {
    pub fn num_displacement(&self) -> usize {
        self.a.rows()
    }

    pub fn num_pressure(&self) -> usize {
        self.b.rows()
    }

    fn check(&self) -> Result<()> {
        let (nu, np) = (self.a.rows(), self.b.rows());
        if self.a.cols() != nu || self.b.cols() != nu || self.rhs_u.len() != nu || self.rhs_p.len() != np {
            return Err(Error::Dimension(format!(
                "saddle system: A {:?}, B {:?}, rhs {}+{}",
                self.a.shape(),
                self.b.shape(),
                self.rhs_u.len(),
                self.rhs_p.len()
            )));
        }
        Ok(())
    }

    /// The assembled block matrix.
    pub fn block_matrix(&self) -> SparseMatrix {
        let (nu, np) = (self.num_displacement(), self.num_pressure());
        let mut t = TriMat::with_capacity((nu + np, nu + np), self.a.nnz() + 2 * self.b.nnz());
        for (v, (i, j)) in self.a.iter() {
            t.add_triplet(i, j, *v);
        }
        for (v, (q, j)) in self.b.iter() {
            t.add_triplet(nu + q, j, *v);
            t.add_triplet(j, nu + q, *v);
        }
        t.to_csr()
    }

    /// `K x - rhs` split into displacement and pressure parts.
    pub fn residual(&self, u: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut ru = mat_vec(&self.a, u);
        for (r, bt) in ru.iter_mut().zip(mat_t_vec(&self.b, p)) {
            *r += bt;
        }
        for (r, f) in ru.iter_mut().zip(&self.rhs_u) {
            *r -= f;
        }
        let mut rp = mat_vec(&self.b, u);
        for (r, g) in rp.iter_mut().zip(&self.rhs_p) {
            *r -= g;
        }
        (ru, rp)
    }

    pub fn relative_residual(&self, u: &[f64], p: &[f64]) -> f64 {
        let (ru, rp) = self.residual(u, p);
        let r = norm2(&ru) + norm2(&rp);
        let b = norm2(&self.rhs_u) + norm2(&self.rhs_p);
        if b == 0.0 {
            r.sqrt()
        } else {
            (r / b).sqrt()
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Solves the block system by band LU with partial pivoting, followed by up
/// to three steps of iterative refinement if the residual is above
/// [`RESIDUAL_TOLERANCE`].
pub fn solve_saddle(sys: &SaddleSystem) -> Result<SaddleSolution> {
    sys.check()?;
    let nu = sys.num_displacement();
    let k = sys.block_matrix();
    let lu = BandedLu::factor(&k, "saddle-point block system")?;

    let rhs: Vec<f64> = sys.rhs_u.iter().chain(&sys.rhs_p).copied().collect();
    let mut x = lu.solve(&rhs);
    let mut res = sys.relative_residual(&x[..nu], &x[nu..]);
    for _ in 0..3 {
        if res <= RESIDUAL_TOLERANCE {
            break;
        }
        let (ru, rp) = sys.residual(&x[..nu], &x[nu..]);
        let r: Vec<f64> = ru.into_iter().chain(rp).collect();
        let dx = lu.solve(&r);
        for (xi, d) in x.iter_mut().zip(dx) {
            *xi -= d;
        }
        res = sys.relative_residual(&x[..nu], &x[nu..]);
    }
    if !res.is_finite() {
        return Err(Error::Singular {
            system: "saddle-point block system".into(),
            pivot: 0,
        });
    }
    let pressure = x.split_off(nu);
    Ok(SaddleSolution {
        displacement: x,
        pressure,
        relative_residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_one_system() {
        // [[2, 0, 1], [0, 2, 1], [1, 1, 0]] (u1, u2, p) = (1, 3, 0)
        // gives u = (-1/2, 1/2), p = 2.
        let mut a = TriMat::new((2, 2));
        a.add_triplet(0, 0, 2.0);
        a.add_triplet(1, 1, 2.0);
        let mut b = TriMat::new((1, 2));
        b.add_triplet(0, 0, 1.0);
        b.add_triplet(0, 1, 1.0);
        let sys = SaddleSystem {
            a: a.to_csr(),
            b: b.to_csr(),
            rhs_u: vec![1.0, 3.0],
            rhs_p: vec![0.0],
        };
        let sol = solve_saddle(&sys).unwrap();
        assert!((sol.displacement[0] + 0.5).abs() < 1e-14);
        assert!((sol.displacement[1] - 0.5).abs() < 1e-14);
        assert!((sol.pressure[0] - 2.0).abs() < 1e-14);
        assert!(sol.relative_residual < 1e-15);
    }

    #[test]
    fn rank_deficient_coupling_is_singular() {
        let mut a = TriMat::new((2, 2));
        a.add_triplet(0, 0, 1.0);
        a.add_triplet(1, 1, 1.0);
        let b = TriMat::<f64>::new((1, 2));
        let sys = SaddleSystem {
            a: a.to_csr(),
            b: b.to_csr(),
            rhs_u: vec![1.0, 1.0],
            rhs_p: vec![1.0],
        };
        assert!(solve_saddle(&sys).is_err());
    }
}
