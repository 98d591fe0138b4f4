//! Element-by-element assembly of the bilinear forms and load vectors.
//!
//! All `assemble_*` functions work on the full displacement numbering of a
//! [`MixedSpace`]; [`AssembledSystem`] restricts them to the free dofs.
//! Matrix rows index test functions and columns trial functions.

use std::io::Write;

use sprs::{CsMat, TriMat};

use crate::error::{Error, Result};
use crate::spaces::basis::ElementGeometry;
use crate::spaces::quadrature::{make_quadrature, QuadratureRule, ASSEMBLY_DEGREE, LOAD_DEGREE};
use crate::spaces::MixedSpace;

pub type SparseMatrix = CsMat<f64>;

/// Affine weight `r(x, y) = 1 - y` of the load-dependent term.
pub fn load_weight(_x: f64, y: f64) -> f64 {
    1.0 - y
}

/// Per-quadrature-point data handed to element kernels.
struct PointData<'a> {
    xy: [f64; 2],
    /// Quadrature weight times `2|T|`.
    dx: f64,
    values: &'a [f64],
    grads: &'a [[f64; 2]],
}

fn assembly_rule() -> QuadratureRule {
    make_quadrature(ASSEMBLY_DEGREE).expect("assembly degree is supported")
}

/// Assembles a displacement-displacement form. `kernel(p, c, a, d, b)`
/// returns the integrand for trial `(component c, shape a)` and test
/// `(component d, shape b)`.
fn assemble_vector_form<K>(space: &MixedSpace, kernel: K) -> SparseMatrix
where
    K: Fn(&PointData, usize, usize, usize, usize) -> f64,
{
    let rule = assembly_rule();
    let n = space.num_displacement_dofs();
    let mesh = space.mesh();
    let with_bubble = space.element().has_bubble();
    let ns = space.element().shapes_per_triangle();
    let mut trip = TriMat::with_capacity((n, n), mesh.num_triangles() * 4 * ns * ns);
    let mut local = vec![0.0; 4 * ns * ns];

    for t in 0..mesh.num_triangles() {
        let geo = ElementGeometry::new(mesh.vertices(t));
        let dofs = space.displacement_dof_map(t);
        local.iter_mut().for_each(|v| *v = 0.0);
        for (l, w) in rule.iter() {
            let (values, grads) = geo.shape(l, with_bubble);
            let p = PointData {
                xy: geo.point(l),
                dx: 2.0 * geo.area * w,
                values: &values,
                grads: &grads,
            };
            for d in 0..2 {
                for b in 0..ns {
                    let row = d * ns + b;
                    for c in 0..2 {
                        for a in 0..ns {
                            let col = c * ns + a;
                            local[row * 2 * ns + col] += p.dx * kernel(&p, c, a, d, b);
                        }
                    }
                }
            }
        }
        for (i, gi) in dofs.iter().enumerate() {
            for (j, gj) in dofs.iter().enumerate() {
                trip.add_triplet(*gi, *gj, local[i * 2 * ns + j]);
            }
        }
    }
    trip.to_csr()
}

/// `∫ 2 ε(w):ε(v)` (the elastic term with unit shear modulus).
pub fn assemble_strain(space: &MixedSpace) -> SparseMatrix {
    assemble_vector_form(space, |p, c, a, d, b| {
        let ga = p.grads[a];
        let gb = p.grads[b];
        let lap = if c == d { ga[0] * gb[0] + ga[1] * gb[1] } else { 0.0 };
        lap + ga[d] * gb[c]
    })
}

/// `∫ r (∇w)^T : ∇v` with `r = 1 - y`.
pub fn assemble_load_stiffness(space: &MixedSpace) -> SparseMatrix {
    assemble_vector_form(space, |p, c, a, d, b| {
        load_weight(p.xy[0], p.xy[1]) * p.grads[a][d] * p.grads[b][c]
    })
}

/// `2μ ∫ ε(w):ε(v) − γ ∫ r (∇w)^T : ∇v`.
pub fn assemble_elastic(space: &MixedSpace, mu: f64, gamma: f64) -> Result<SparseMatrix> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Parameter(format!("shear modulus must be positive, got {mu}")));
    }
    if !gamma.is_finite() {
        return Err(Error::Parameter(format!("load factor must be finite, got {gamma}")));
    }
    Ok(combine(&assemble_strain(space), mu, &assemble_load_stiffness(space), -gamma))
}

/// `∫ div w div v` (without the stabilization weight).
pub fn assemble_divdiv(space: &MixedSpace) -> SparseMatrix {
    assemble_vector_form(space, |p, c, a, d, b| p.grads[a][c] * p.grads[b][d])
}

/// Full `H^1` inner product `∫ ∇w:∇v + w·v`.
pub fn assemble_h1_gram(space: &MixedSpace) -> SparseMatrix {
    assemble_vector_form(space, |p, c, a, d, b| {
        if c != d {
            return 0.0;
        }
        let ga = p.grads[a];
        let gb = p.grads[b];
        ga[0] * gb[0] + ga[1] * gb[1] + p.values[a] * p.values[b]
    })
}

/// Coupling `B[q][v] = ∫ q div v`, pressure rows by displacement columns.
pub fn assemble_coupling(space: &MixedSpace) -> SparseMatrix {
    let rule = assembly_rule();
    let mesh = space.mesh();
    let with_bubble = space.element().has_bubble();
    let ns = space.element().shapes_per_triangle();
    let shape = (space.num_pressure_dofs(), space.num_displacement_dofs());
    let mut trip = TriMat::with_capacity(shape, mesh.num_triangles() * 6 * ns);

    for t in 0..mesh.num_triangles() {
        let geo = ElementGeometry::new(mesh.vertices(t));
        let dofs = space.displacement_dof_map(t);
        let pdofs = space.pressure_dof_map(t);
        let mut local = vec![[0.0; 8]; 3];
        for (l, w) in rule.iter() {
            let (_, grads) = geo.shape(l, with_bubble);
            let dx = 2.0 * geo.area * w;
            for (q, row) in local.iter_mut().enumerate() {
                for c in 0..2 {
                    for a in 0..ns {
                        row[c * ns + a] += dx * l[q] * grads[a][c];
                    }
                }
            }
        }
        for (q, pq) in pdofs.iter().enumerate() {
            for (j, gj) in dofs.iter().enumerate() {
                trip.add_triplet(*pq, *gj, local[q][j]);
            }
        }
    }
    trip.to_csr()
}

/// `L^2` mass matrix of the continuous P1 pressure space.
pub fn assemble_pressure_mass(space: &MixedSpace) -> SparseMatrix {
    let mesh = space.mesh();
    let np = space.num_pressure_dofs();
    let mut trip = TriMat::with_capacity((np, np), 9 * mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        let area = mesh.signed_area(t);
        let tri = mesh.triangles()[t];
        // ∫ λi λj = |T| (1 + δij) / 12
        for (i, a) in tri.iter().enumerate() {
            for (j, b) in tri.iter().enumerate() {
                let m = if i == j { area / 6.0 } else { area / 12.0 };
                trip.add_triplet(*a, *b, m);
            }
        }
    }
    trip.to_csr()
}

/// `scale ∫ f·φ_i` for every displacement basis function (full numbering).
pub fn assemble_load_full<F>(space: &MixedSpace, f: F, scale: f64) -> Vec<f64>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    let rule = make_quadrature(LOAD_DEGREE).expect("load degree is supported");
    let mesh = space.mesh();
    let with_bubble = space.element().has_bubble();
    let ns = space.element().shapes_per_triangle();
    let mut rhs = vec![0.0; space.num_displacement_dofs()];
    for t in 0..mesh.num_triangles() {
        let geo = ElementGeometry::new(mesh.vertices(t));
        let dofs = space.displacement_dof_map(t);
        for (l, w) in rule.iter() {
            let (values, _) = geo.shape(l, with_bubble);
            let xy = geo.point(l);
            let fv = f(xy[0], xy[1]);
            let dx = 2.0 * geo.area * w * scale;
            for d in 0..2 {
                for b in 0..ns {
                    rhs[dofs[d * ns + b]] += dx * fv[d] * values[b];
                }
            }
        }
    }
    rhs
}

/// Load vector restricted to the free dofs.
pub fn assemble_load<F>(space: &MixedSpace, f: F, scale: f64) -> Vec<f64>
where
    F: Fn(f64, f64) -> [f64; 2],
{
    space.restrict_vector(&assemble_load_full(space, f, scale))
}

/// `alpha * a + beta * b`.
pub fn combine(a: &SparseMatrix, alpha: f64, b: &SparseMatrix, beta: f64) -> SparseMatrix {
    let sa = a.map(|v| alpha * v);
    let sb = b.map(|v| beta * v);
    &sa + &sb
}

/// Keeps the free rows and columns of a displacement-displacement matrix.
pub fn restrict_square(space: &MixedSpace, m: &SparseMatrix) -> SparseMatrix {
    let n = space.num_free_dofs();
    let mut trip = TriMat::with_capacity((n, n), m.nnz());
    for (v, (i, j)) in m.iter() {
        if let (Some(fi), Some(fj)) = (space.free_index(i), space.free_index(j)) {
            trip.add_triplet(fi, fj, *v);
        }
    }
    trip.to_csr()
}

/// Keeps the free columns of a pressure-by-displacement matrix.
pub fn restrict_columns(space: &MixedSpace, m: &SparseMatrix) -> SparseMatrix {
    let shape = (m.rows(), space.num_free_dofs());
    let mut trip = TriMat::with_capacity(shape, m.nnz());
    for (v, (i, j)) in m.iter() {
        if let Some(fj) = space.free_index(j) {
            trip.add_triplet(i, fj, *v);
        }
    }
    trip.to_csr()
}

/// Dense copy, for small oracles and dense eigen-analysis.
pub fn to_dense(m: &SparseMatrix) -> nalgebra::DMatrix<f64> {
    let mut d = nalgebra::DMatrix::zeros(m.rows(), m.cols());
    for (v, (i, j)) in m.iter() {
        d[(i, j)] += *v;
    }
    d
}

/// `y = m x`.
pub fn mat_vec(m: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m.rows()];
    for (v, (i, j)) in m.iter() {
        y[i] += v * x[j];
    }
    y
}

/// `y = m^T x`.
pub fn mat_t_vec(m: &SparseMatrix, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m.cols()];
    for (v, (i, j)) in m.iter() {
        y[j] += v * x[i];
    }
    y
}

/// `x^T m y`.
pub fn bilinear(m: &SparseMatrix, x: &[f64], y: &[f64]) -> f64 {
    m.iter().map(|(v, (i, j))| x[i] * v * y[j]).sum()
}

/// Coordinate text export: one `row col value` line per stored entry.
pub fn write_coordinate_text<W: Write>(m: &SparseMatrix, mut out: W) -> Result<()> {
    for (v, (i, j)) in m.iter() {
        writeln!(out, "{i} {j} {v:.17e}")?;
    }
    Ok(())
}

/// Every operator needed to study one space, restricted to the free dofs.
///
/// The elastic block is kept split so it can be re-weighted for any
/// `(μ, γ)` without reassembly.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    /// `∫ 2 ε(w):ε(v)`.
    pub strain: SparseMatrix,
    /// `∫ r (∇w)^T : ∇v`.
    pub load_stiffness: SparseMatrix,
    pub divdiv: SparseMatrix,
    /// Pressure rows by free displacement columns.
    pub coupling: SparseMatrix,
    pub pressure_mass: SparseMatrix,
    pub h1_gram: SparseMatrix,
}

impl AssembledSystem {
    pub fn assemble(space: &MixedSpace) -> Self {
        AssembledSystem {
            strain: restrict_square(space, &assemble_strain(space)),
            load_stiffness: restrict_square(space, &assemble_load_stiffness(space)),
            divdiv: restrict_square(space, &assemble_divdiv(space)),
            coupling: restrict_columns(space, &assemble_coupling(space)),
            pressure_mass: assemble_pressure_mass(space),
            h1_gram: restrict_square(space, &assemble_h1_gram(space)),
        }
    }

    pub fn elastic(&self, mu: f64, gamma: f64) -> SparseMatrix {
        combine(&self.strain, mu, &self.load_stiffness, -gamma)
    }

    /// Stabilized displacement block `A_elastic(μ, γ) + M S_divdiv`.
    pub fn stabilized(&self, mu: f64, gamma: f64, m: f64) -> SparseMatrix {
        combine(&self.elastic(mu, gamma), 1.0, &self.divdiv, m)
    }
}
