//! Independent reference computations shared by the integration tests.
//!
//! Basis functions are rebuilt here from the vertex coordinates alone so the
//! oracles do not go through the library's element code.

#![allow(dead_code)]

use nalgebra::{Matrix3, Vector3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use stabmix::spaces::MixedSpace;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_vector(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Seven-point rule exact for polynomials of degree 5, barycentric points
/// with weights summing to one.
pub fn degree5_rule() -> Vec<([f64; 3], f64)> {
    let s = 15f64.sqrt();
    let (a1, b1, w1) = ((9.0 - 2.0 * s) / 21.0, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
    let (a2, b2, w2) = ((9.0 + 2.0 * s) / 21.0, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
    let mut pts = vec![([1.0 / 3.0; 3], 9.0 / 40.0)];
    for (a, b, w) in [(a1, b1, w1), (a2, b2, w2)] {
        pts.push(([a, b, b], w));
        pts.push(([b, a, b], w));
        pts.push(([b, b, a], w));
    }
    pts
}

/// Affine hat functions of one triangle: `λ_i(x, y) = c_i + g_i · (x, y)`.
pub struct Hats {
    pub vertices: [[f64; 2]; 3],
    pub area: f64,
    coef: Matrix3<f64>,
}

impl Hats {
    pub fn new(v: [[f64; 2]; 3]) -> Self {
        let m = Matrix3::new(1.0, v[0][0], v[0][1], 1.0, v[1][0], v[1][1], 1.0, v[2][0], v[2][1]);
        let area = 0.5 * m.determinant().abs();
        // Column i of the inverse holds (c_i, gx_i, gy_i).
        let coef = m.try_inverse().expect("degenerate triangle");
        Hats { vertices: v, area, coef }
    }

    pub fn point(&self, l: &[f64; 3]) -> [f64; 2] {
        let v = &self.vertices;
        [
            l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
            l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
        ]
    }

    pub fn lambda(&self, x: f64, y: f64) -> [f64; 3] {
        let r = Vector3::new(1.0, x, y).transpose() * self.coef;
        [r[0], r[1], r[2]]
    }

    pub fn grad(&self, i: usize) -> [f64; 2] {
        [self.coef[(1, i)], self.coef[(2, i)]]
    }

    /// Values and gradients of the three hats, then the bubble
    /// `27 λ0 λ1 λ2` when requested.
    pub fn shapes(&self, x: f64, y: f64, bubble: bool) -> (Vec<f64>, Vec<[f64; 2]>) {
        let l = self.lambda(x, y);
        let g = [self.grad(0), self.grad(1), self.grad(2)];
        let mut values = l.to_vec();
        let mut grads = g.to_vec();
        if bubble {
            values.push(27.0 * l[0] * l[1] * l[2]);
            let mut gb = [0.0; 2];
            for k in 0..2 {
                gb[k] = 27.0 * (g[0][k] * l[1] * l[2] + l[0] * g[1][k] * l[2] + l[0] * l[1] * g[2][k]);
            }
            grads.push(gb);
        }
        (values, grads)
    }
}

/// Value and gradient (`grad[c][d] = ∂_d v_c`) of a full displacement
/// coefficient vector on triangle `t` at `(x, y)`.
pub fn field_at(space: &MixedSpace, hats: &Hats, t: usize, coef: &[f64], x: f64, y: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let bubble = space.element().has_bubble();
    let (values, grads) = hats.shapes(x, y, bubble);
    let ns = values.len();
    let dofs = space.displacement_dof_map(t);
    let mut val = [0.0; 2];
    let mut grad = [[0.0; 2]; 2];
    for c in 0..2 {
        for a in 0..ns {
            let k = coef[dofs[c * ns + a]];
            val[c] += k * values[a];
            grad[c][0] += k * grads[a][0];
            grad[c][1] += k * grads[a][1];
        }
    }
    (val, grad)
}

pub fn pressure_at(space: &MixedSpace, hats: &Hats, t: usize, q: &[f64], x: f64, y: f64) -> f64 {
    let l = hats.lambda(x, y);
    let pd = space.pressure_dof_map(t);
    (0..3).map(|k| q[pd[k]] * l[k]).sum()
}

/// Integrates `f(t, hats, x, y)` over the mesh with a per-triangle rule.
pub fn integrate<F>(space: &MixedSpace, rule: &[([f64; 3], f64)], f: F) -> f64
where
    F: Fn(usize, &Hats, f64, f64) -> f64,
{
    let mesh = space.mesh();
    let mut total = 0.0;
    for t in 0..mesh.num_triangles() {
        let hats = Hats::new(mesh.vertices(t));
        for (l, w) in rule {
            let [x, y] = hats.point(l);
            total += hats.area * w * f(t, &hats, x, y);
        }
    }
    total
}

/// Adaptive integration of `f` over a triangle by recursive 4-way
/// subdivision with the degree-5 rule, until refinement changes the value
/// by less than `tol`.
pub fn adaptive_triangle<F: Fn(f64, f64) -> f64>(v: [[f64; 2]; 3], f: &F, tol: f64) -> f64 {
    let coarse = rule_on(v, f);
    adaptive_rec(v, f, tol, coarse, 0)
}

fn rule_on<F: Fn(f64, f64) -> f64>(v: [[f64; 2]; 3], f: &F) -> f64 {
    let area = 0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])).abs();
    degree5_rule()
        .iter()
        .map(|(l, w)| {
            let x = l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0];
            let y = l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1];
            area * w * f(x, y)
        })
        .sum()
}

fn adaptive_rec<F: Fn(f64, f64) -> f64>(v: [[f64; 2]; 3], f: &F, tol: f64, coarse: f64, depth: u32) -> f64 {
    let mid = |a: [f64; 2], b: [f64; 2]| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let (m01, m12, m20) = (mid(v[0], v[1]), mid(v[1], v[2]), mid(v[2], v[0]));
    let kids = [[v[0], m01, m20], [m01, v[1], m12], [m20, m12, v[2]], [m01, m12, m20]];
    let parts: Vec<f64> = kids.iter().map(|k| rule_on(*k, f)).collect();
    let fine: f64 = parts.iter().sum();
    if (fine - coarse).abs() <= tol || depth >= 8 {
        return fine;
    }
    kids.iter()
        .zip(parts)
        .map(|(k, c)| adaptive_rec(*k, f, tol / 4.0, c, depth + 1))
        .sum()
}
