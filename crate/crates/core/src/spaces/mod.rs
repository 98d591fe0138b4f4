//! Discrete displacement and pressure spaces.
//!
//! Displacement dofs are numbered component-interleaved: vertex `v` owns
//! `2v` (x) and `2v + 1` (y); the bubble of triangle `t` owns
//! `2(n_nodes + t)` and `2(n_nodes + t) + 1`. Pressure dofs are the mesh
//! nodes. Constrained displacement dofs are eliminated; the remaining ones
//! are renumbered consecutively as free dofs.

pub mod basis;
pub mod quadrature;

use crate::error::{Error, Result};
use crate::mesh::{NodeRole, TriMesh};

/// Boundary-condition variant of the model problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    /// Problem 1: both displacement components vanish on `GammaD`.
    Clamped,
    /// Problem 2: the normal displacement vanishes on `GammaD`.
    NormalOnly,
}

impl Problem {
    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Problem::Clamped),
            2 => Ok(Problem::NormalOnly),
            other => Err(Error::UnknownProblem(other)),
        }
    }

    pub fn id(&self) -> u32 {
        match self {
            Problem::Clamped => 1,
            Problem::NormalOnly => 2,
        }
    }
}

/// Displacement element. `P1` drops the bubbles and is only useful as an
/// unstable control for the inf-sup estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisplacementElement {
    Mini,
    P1,
}

impl DisplacementElement {
    pub fn has_bubble(&self) -> bool {
        matches!(self, DisplacementElement::Mini)
    }

    /// Scalar shape functions per triangle.
    pub fn shapes_per_triangle(&self) -> usize {
        if self.has_bubble() {
            4
        } else {
            3
        }
    }
}

/// Sorted list of homogeneously constrained displacement dofs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    dofs: Vec<usize>,
}

impl ConstraintSet {
    pub fn dofs(&self) -> &[usize] {
        &self.dofs
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    pub fn contains(&self, dof: usize) -> bool {
        self.dofs.binary_search(&dof).is_ok()
    }
}

/// Constraints of `problem` on the vertex dofs of `mesh`. Bubbles vanish on
/// the boundary and are never constrained; pressure is never constrained.
pub fn build_constraints(mesh: &TriMesh, problem: Problem) -> ConstraintSet {
    let mut dofs = Vec::new();
    for v in 0..mesh.num_nodes() {
        let (x, y) = (2 * v, 2 * v + 1);
        match (problem, mesh.node_role(v)) {
            (_, NodeRole::Interior) | (_, NodeRole::Top) => {}
            (Problem::Clamped, _) => dofs.extend([x, y]),
            (Problem::NormalOnly, NodeRole::Side) | (Problem::NormalOnly, NodeRole::TopCorner) => {
                dofs.push(x)
            }
            (Problem::NormalOnly, NodeRole::Bottom) => dofs.push(y),
            (Problem::NormalOnly, NodeRole::BottomCorner) => dofs.extend([x, y]),
        }
    }
    ConstraintSet { dofs }
}

/// Constraint set of a problem given by its numeric id.
pub fn build_constraints_for_id(mesh: &TriMesh, problem_id: u32) -> Result<ConstraintSet> {
    Ok(build_constraints(mesh, Problem::from_id(problem_id)?))
}

#[derive(Debug, Clone)]
pub struct MixedSpace {
    mesh: TriMesh,
    element: DisplacementElement,
    problem: Problem,
    constraints: ConstraintSet,
    free_index: Vec<Option<usize>>,
    free_dofs: Vec<usize>,
}

impl MixedSpace {
    pub fn new(mesh: TriMesh, element: DisplacementElement, problem: Problem) -> Self {
        let constraints = build_constraints(&mesh, problem);
        let n_disp = displacement_dofs(&mesh, element);
        let mut free_index = vec![None; n_disp];
        let mut free_dofs = Vec::with_capacity(n_disp - constraints.len());
        for (dof, slot) in free_index.iter_mut().enumerate() {
            if !constraints.contains(dof) {
                *slot = Some(free_dofs.len());
                free_dofs.push(dof);
            }
        }
        MixedSpace {
            mesh,
            element,
            problem,
            constraints,
            free_index,
            free_dofs,
        }
    }

    /// MINI space on an `n x n` structured mesh.
    pub fn mini(n: usize, problem: Problem) -> Result<Self> {
        Ok(Self::new(
            crate::mesh::build_structured_mesh(n)?,
            DisplacementElement::Mini,
            problem,
        ))
    }

    pub fn mesh(&self) -> &TriMesh {
        &self.mesh
    }

    pub fn element(&self) -> DisplacementElement {
        self.element
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn constraints(&self) -> &ConstraintSet {
        &self.constraints
    }

    pub fn num_displacement_dofs(&self) -> usize {
        self.free_index.len()
    }

    pub fn num_pressure_dofs(&self) -> usize {
        self.mesh.num_nodes()
    }

    pub fn num_free_dofs(&self) -> usize {
        self.free_dofs.len()
    }

    /// Full dof index of each free dof.
    pub fn free_dofs(&self) -> &[usize] {
        &self.free_dofs
    }

    pub fn free_index(&self, dof: usize) -> Option<usize> {
        self.free_index[dof]
    }

    /// Global scalar-function indices (vertex `v` → `v`, bubble of `t` →
    /// `n_nodes + t`) of the shapes on triangle `t`.
    pub fn scalar_functions(&self, t: usize) -> Vec<usize> {
        let tri = self.mesh.triangles()[t];
        let mut f = tri.to_vec();
        if self.element.has_bubble() {
            f.push(self.mesh.num_nodes() + t);
        }
        f
    }

    /// Local-to-global displacement dofs of triangle `t`, ordered as
    /// `(component, shape)` with the shape index fastest.
    pub fn displacement_dof_map(&self, t: usize) -> Vec<usize> {
        let funcs = self.scalar_functions(t);
        let mut dofs = Vec::with_capacity(2 * funcs.len());
        for c in 0..2 {
            dofs.extend(funcs.iter().map(|f| 2 * f + c));
        }
        dofs
    }

    pub fn pressure_dof_map(&self, t: usize) -> [usize; 3] {
        self.mesh.triangles()[t]
    }

    /// Scatters free-dof coefficients into a full displacement vector.
    pub fn expand(&self, free: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.num_displacement_dofs()];
        for (k, dof) in self.free_dofs.iter().enumerate() {
            full[*dof] = free[k];
        }
        full
    }

    /// Gathers the free entries of a full displacement vector.
    pub fn restrict_vector(&self, full: &[f64]) -> Vec<f64> {
        self.free_dofs.iter().map(|d| full[*d]).collect()
    }

    /// Full displacement coefficients of the nodal interpolant of `field`
    /// (bubble coefficients zero).
    pub fn interpolate_linear<F: Fn(f64, f64) -> [f64; 2]>(&self, field: F) -> Vec<f64> {
        let mut full = vec![0.0; self.num_displacement_dofs()];
        for (v, p) in self.mesh.nodes().iter().enumerate() {
            let u = field(p[0], p[1]);
            full[2 * v] = u[0];
            full[2 * v + 1] = u[1];
        }
        full
    }

    /// Pressure coefficients of the nodal interpolant of `field`.
    pub fn interpolate_pressure<F: Fn(f64, f64) -> f64>(&self, field: F) -> Vec<f64> {
        self.mesh.nodes().iter().map(|p| field(p[0], p[1])).collect()
    }
}

fn displacement_dofs(mesh: &TriMesh, element: DisplacementElement) -> usize {
    let bubbles = if element.has_bubble() {
        mesh.num_triangles()
    } else {
        0
    };
    2 * (mesh.num_nodes() + bubbles)
}
