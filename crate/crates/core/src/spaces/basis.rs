//! Linear hat functions and the cubic bubble on a triangle.

use crate::error::{Error, Result};

/// Reference triangle vertices `(0,0), (1,0), (0,1)`.
pub const REFERENCE_TRIANGLE: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

/// Bubble normalization: `27 λ1 λ2 λ3` equals one at the centroid.
pub const BUBBLE_SCALE: f64 = 27.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    P1,
    Bubble,
}

/// A point in barycentric coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Barycentric([f64; 3]);

impl Barycentric {
    pub fn new(l: [f64; 3]) -> Result<Self> {
        const TOL: f64 = 1e-12;
        let ok = l.iter().all(|c| c.is_finite() && *c >= -TOL)
            && (l.iter().sum::<f64>() - 1.0).abs() <= TOL;
        if ok {
            Ok(Barycentric(l))
        } else {
            Err(Error::InvalidBarycentric(l))
        }
    }

    pub fn centroid() -> Self {
        Barycentric([1.0 / 3.0; 3])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }
}

/// Basis values and gradients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisEval {
    pub values: Vec<f64>,
    pub gradients: Vec<[f64; 2]>,
}

/// Evaluates the basis of `kind` on the reference triangle. Gradients are
/// with respect to reference coordinates `(x, y)`.
pub fn reference_basis(kind: BasisKind, point: &Barycentric) -> BasisEval {
    let geo = ElementGeometry::new(REFERENCE_TRIANGLE);
    let l = point.coords();
    match kind {
        BasisKind::P1 => BasisEval {
            values: l.to_vec(),
            gradients: geo.grad_lambda.to_vec(),
        },
        BasisKind::Bubble => {
            let (v, g) = geo.bubble(&l);
            BasisEval {
                values: vec![v],
                gradients: vec![g],
            }
        }
    }
}

/// Affine triangle data needed for physical basis gradients.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub vertices: [[f64; 2]; 3],
    pub area: f64,
    /// Constant physical gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
}

impl ElementGeometry {
    pub fn new(vertices: [[f64; 2]; 3]) -> Self {
        let [p0, p1, p2] = vertices;
        let det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let area = 0.5 * det;
        // ∇λ_i is the inward normal of the opposite edge scaled by 1/(2|T|).
        let grad = |a: [f64; 2], b: [f64; 2]| [(a[1] - b[1]) / det, (b[0] - a[0]) / det];
        let grad_lambda = [grad(p1, p2), grad(p2, p0), grad(p0, p1)];
        ElementGeometry {
            vertices,
            area,
            grad_lambda,
        }
    }

    pub fn point(&self, l: &[f64; 3]) -> [f64; 2] {
        let v = &self.vertices;
        [
            l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
            l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
        ]
    }

    /// Bubble value and physical gradient.
    pub fn bubble(&self, l: &[f64; 3]) -> (f64, [f64; 2]) {
        let g = &self.grad_lambda;
        let value = BUBBLE_SCALE * l[0] * l[1] * l[2];
        let c = [l[1] * l[2], l[0] * l[2], l[0] * l[1]];
        let gx = BUBBLE_SCALE * (c[0] * g[0][0] + c[1] * g[1][0] + c[2] * g[2][0]);
        let gy = BUBBLE_SCALE * (c[0] * g[0][1] + c[1] * g[1][1] + c[2] * g[2][1]);
        (value, [gx, gy])
    }

    /// Scalar shape functions: three hats, then the bubble when requested.
    pub fn shape(&self, l: &[f64; 3], with_bubble: bool) -> (Vec<f64>, Vec<[f64; 2]>) {
        let mut values = l.to_vec();
        let mut grads = self.grad_lambda.to_vec();
        if with_bubble {
            let (v, g) = self.bubble(l);
            values.push(v);
            grads.push(g);
        }
        (values, grads)
    }
}
