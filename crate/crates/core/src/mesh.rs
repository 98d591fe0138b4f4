//! Structured triangulations of the reference square `(-1,1)^2`.
//!
//! Nodes are numbered row by row (`index = j * n + i`, `i` along x). Each grid
//! cell is split along one diagonal into two counterclockwise triangles; the
//! default is the lower-right to upper-left diagonal.

use std::io::Write;

use crate::error::{Error, Result};

/// Boundary part an edge or node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    /// The traction-free top side `y = 1`.
    GammaTop,
    /// The remaining three sides, where displacement constraints act.
    GammaD,
}

impl BoundaryTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryTag::GammaTop => "GammaTop",
            BoundaryTag::GammaD => "GammaD",
        }
    }
}

/// Classification of a node with respect to the boundary.
///
/// Top corners belong to the side edges: they are part of the closed set
/// `GammaD`, so the side constraint applies there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Interior,
    /// On `y = 1`, strictly between the corners.
    Top,
    /// On `x = ±1`, strictly between `y = -1` and `y = 1`.
    Side,
    /// On `y = -1`, strictly between the corners.
    Bottom,
    /// `(±1, -1)`: the side and bottom normals meet.
    BottomCorner,
    /// `(±1, 1)`: on both the top and a side; treated as a side node.
    TopCorner,
}

impl NodeRole {
    pub fn tag(&self) -> Option<BoundaryTag> {
        match self {
            NodeRole::Interior => None,
            NodeRole::Top => Some(BoundaryTag::GammaTop),
            _ => Some(BoundaryTag::GammaD),
        }
    }

    pub fn is_gamma_d(&self) -> bool {
        self.tag() == Some(BoundaryTag::GammaD)
    }
}

/// How each grid cell is split into two triangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Diagonal {
    /// Lower-left to upper-right.
    Rising,
    /// Lower-right to upper-left. Critical loads are identical for both
    /// directions (the model problems are symmetric under `x -> -x`), but
    /// the manufactured pressure `e^x (1 - y)` is not, and its discretization
    /// errors depend on the direction.
    #[default]
    Falling,
}

#[derive(Debug, Clone)]
pub struct TriMesh {
    n: usize,
    diagonal: Diagonal,
    nodes: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<([usize; 2], BoundaryTag)>,
}

/// Builds the `n x n` node grid on `[-1,1]^2` with `2 (n-1)^2` triangles.
pub fn build_structured_mesh(n: usize) -> Result<TriMesh> {
    build_structured_mesh_with(n, Diagonal::default())
}

/// Same as [`build_structured_mesh`] with an explicit diagonal direction.
pub fn build_structured_mesh_with(n: usize, diagonal: Diagonal) -> Result<TriMesh> {
    if n < 2 {
        return Err(Error::InvalidResolution(n));
    }
    let step = (n - 1) as f64;
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / step;

    let mut nodes = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            nodes.push([coord(i), coord(j)]);
        }
    }

    let id = |i: usize, j: usize| j * n + i;
    let mut triangles = Vec::with_capacity(2 * (n - 1) * (n - 1));
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let a = id(i, j);
            let b = id(i + 1, j);
            let c = id(i + 1, j + 1);
            let d = id(i, j + 1);
            match diagonal {
                Diagonal::Rising => {
                    triangles.push([a, b, c]);
                    triangles.push([a, c, d]);
                }
                Diagonal::Falling => {
                    triangles.push([a, b, d]);
                    triangles.push([b, c, d]);
                }
            }
        }
    }

    let mut boundary_edges = Vec::with_capacity(4 * (n - 1));
    for i in 0..n - 1 {
        // bottom, left to right
        boundary_edges.push(([id(i, 0), id(i + 1, 0)], BoundaryTag::GammaD));
    }
    for j in 0..n - 1 {
        // right side, upwards
        boundary_edges.push(([id(n - 1, j), id(n - 1, j + 1)], BoundaryTag::GammaD));
    }
    for i in (0..n - 1).rev() {
        // top, right to left
        boundary_edges.push(([id(i + 1, n - 1), id(i, n - 1)], BoundaryTag::GammaTop));
    }
    for j in (0..n - 1).rev() {
        // left side, downwards
        boundary_edges.push(([id(0, j + 1), id(0, j)], BoundaryTag::GammaD));
    }

    Ok(TriMesh {
        n,
        diagonal,
        nodes,
        triangles,
        boundary_edges,
    })
}

impl TriMesh {
    /// Nodes per side.
    pub fn nodes_per_side(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> Diagonal {
        self.diagonal
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[([usize; 2], BoundaryTag)] {
        &self.boundary_edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Uniform mesh size `2 / (n - 1)`.
    pub fn h(&self) -> f64 {
        2.0 / (self.n - 1) as f64
    }

    pub fn vertices(&self, t: usize) -> [[f64; 2]; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Signed area of triangle `t` (positive for counterclockwise ordering).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [p0, p1, p2] = self.vertices(t);
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]))
    }

    pub fn centroid(&self, t: usize) -> [f64; 2] {
        let [p0, p1, p2] = self.vertices(t);
        [
            (p0[0] + p1[0] + p2[0]) / 3.0,
            (p0[1] + p1[1] + p2[1]) / 3.0,
        ]
    }

    /// Boundary role of a node, decided from its grid indices.
    pub fn node_role(&self, node: usize) -> NodeRole {
        let n = self.n;
        let (i, j) = (node % n, node / n);
        let on_side = i == 0 || i == n - 1;
        let on_bottom = j == 0;
        let on_top = j == n - 1;
        match (on_side, on_bottom, on_top) {
            (true, true, _) => NodeRole::BottomCorner,
            (true, _, true) => NodeRole::TopCorner,
            (true, false, false) => NodeRole::Side,
            (false, true, _) => NodeRole::Bottom,
            (false, _, true) => NodeRole::Top,
            (false, false, false) => NodeRole::Interior,
        }
    }

    /// Writes nodes, triangles and tagged boundary edges as plain text.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        for [x, y] in &self.nodes {
            writeln!(out, "{x} {y}")?;
        }
        for [a, b, c] in &self.triangles {
            writeln!(out, "{a} {b} {c}")?;
        }
        for ([a, b], tag) in &self.boundary_edges {
            writeln!(out, "{a} {b} {}", tag.as_str())?;
        }
        Ok(())
    }
}

/// Boundary role of every node, indexed by node.
pub fn classify_boundary_nodes(mesh: &TriMesh) -> Vec<NodeRole> {
    (0..mesh.num_nodes()).map(|v| mesh.node_role(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn node_at(mesh: &TriMesh, x: f64, y: f64) -> usize {
        mesh.nodes()
            .iter()
            .position(|p| (p[0] - x).abs() < 1e-14 && (p[1] - y).abs() < 1e-14)
            .unwrap()
    }

    #[test]
    fn counts_follow_grid() {
        for (n, nodes, tris) in [(2, 4, 2), (5, 25, 32), (33, 1089, 2048)] {
            let mesh = build_structured_mesh(n).unwrap();
            assert_eq!(mesh.num_nodes(), nodes);
            assert_eq!(mesh.num_triangles(), tris);
        }
    }

    #[test]
    fn rejects_tiny_resolution() {
        assert!(matches!(build_structured_mesh(1), Err(Error::InvalidResolution(1))));
        assert!(build_structured_mesh(0).is_err());
    }

    #[test]
    fn areas_positive_and_sum_to_four() {
        for (n, diagonal) in [2, 3, 5, 9, 17, 33].into_iter().flat_map(|n| [(n, Diagonal::Rising), (n, Diagonal::Falling)]) {
            let mesh = build_structured_mesh_with(n, diagonal).unwrap();
            let mut total = 0.0;
            for t in 0..mesh.num_triangles() {
                let a = mesh.signed_area(t);
                assert!(a > 0.0);
                total += a;
            }
            assert!((total - 4.0).abs() < 1e-12, "n={n} total={total}");
        }
    }

    #[test]
    fn edges_shared_once_or_twice() {
        let mesh = build_structured_mesh(6).unwrap();
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in mesh.triangles() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let boundary: Vec<(usize, usize)> = mesh
            .boundary_edges()
            .iter()
            .map(|([a, b], _)| (*a.min(b), *a.max(b)))
            .collect();
        assert_eq!(boundary.len(), 4 * 5);
        for (edge, c) in &count {
            if boundary.contains(edge) {
                assert_eq!(*c, 1);
            } else {
                assert_eq!(*c, 2);
            }
        }
    }

    #[test]
    fn top_edges_tagged_by_y() {
        let mesh = build_structured_mesh(5).unwrap();
        for ([a, b], tag) in mesh.boundary_edges() {
            let top = mesh.nodes()[*a][1] == 1.0 && mesh.nodes()[*b][1] == 1.0;
            assert_eq!(top, *tag == BoundaryTag::GammaTop);
        }
    }

    #[test]
    fn diagonal_direction() {
        let mesh = build_structured_mesh(2).unwrap();
        assert_eq!(mesh.diagonal(), Diagonal::Falling);
        // the shared edge joins (1,-1) and (-1,1)
        let shared: Vec<usize> = mesh.triangles()[0]
            .iter()
            .filter(|v| mesh.triangles()[1].contains(v))
            .copied()
            .collect();
        assert_eq!(shared.len(), 2);
        assert!(shared.contains(&1) && shared.contains(&2));
        let rising = build_structured_mesh_with(2, Diagonal::Rising).unwrap();
        assert!(rising.triangles()[0].contains(&0) && rising.triangles()[0].contains(&3));
    }

    #[test]
    fn refinement_halves_h() {
        let coarse = build_structured_mesh(9).unwrap();
        let fine = build_structured_mesh(17).unwrap();
        assert!((coarse.h() - 2.0 * fine.h()).abs() < 1e-15);
    }

    #[test]
    fn node_classification() {
        let mesh = build_structured_mesh(5).unwrap();
        let roles = classify_boundary_nodes(&mesh);
        assert_eq!(roles[node_at(&mesh, 0.0, 1.0)], NodeRole::Top);
        assert_eq!(roles[node_at(&mesh, 0.0, 1.0)].tag(), Some(BoundaryTag::GammaTop));
        assert_eq!(roles[node_at(&mesh, -1.0, 0.0)], NodeRole::Side);
        assert!(roles[node_at(&mesh, -1.0, 0.0)].is_gamma_d());
        assert_eq!(roles[node_at(&mesh, 1.0, 1.0)], NodeRole::TopCorner);
        assert!(roles[node_at(&mesh, 1.0, 1.0)].is_gamma_d());
        assert_eq!(roles[node_at(&mesh, -1.0, -1.0)], NodeRole::BottomCorner);
        assert_eq!(roles[node_at(&mesh, 0.5, -1.0)], NodeRole::Bottom);
        assert_eq!(roles[node_at(&mesh, 0.5, 0.5)], NodeRole::Interior);
        let gamma_d = roles.iter().filter(|r| r.is_gamma_d()).count();
        assert_eq!(gamma_d, 4 * 4 - 3);
    }

    #[test]
    fn text_export_line_count() {
        let mesh = build_structured_mesh(3).unwrap();
        let mut buf = Vec::new();
        mesh.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 9 + 8 + 8);
        assert!(text.lines().last().unwrap().ends_with("GammaD"));
    }
}
