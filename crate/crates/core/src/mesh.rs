//! Indexed triangle mesh with derived adjacency.
//!
//! A [`TriMesh`] is immutable once built. Construction validates the
//! combinatorics (index range, degenerate faces, 2-manifold edges, consistent
//! winding, disk-like vertex fans) and precomputes the sorted edge list,
//! edge-to-face incidence and an ordered one-ring for every vertex.

use std::collections::HashMap;
use std::fmt;

use nalgebra::Vector3;
use thiserror::Error;

/// Positions are plain 3-vectors in model units.
pub type Vec3 = Vector3<f64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshError {
    #[error("face {face} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange {
        face: usize,
        index: usize,
        count: usize,
    },
    #[error("face {face} repeats a vertex index: {indices:?}")]
    DegenerateFace { face: usize, indices: [usize; 3] },
    #[error("edge {edge} is shared by {faces} faces")]
    NonManifold { edge: EdgeKey, faces: usize },
    #[error("faces {first} and {second} traverse edge {edge} in the same direction")]
    InconsistentOrientation {
        edge: EdgeKey,
        first: usize,
        second: usize,
    },
    #[error("the faces around vertex {vertex} do not form a single fan")]
    NonManifoldVertex { vertex: usize },
}

/// Unordered vertex pair, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    a: usize,
    b: usize,
}

impl EdgeKey {
    /// Canonicalizes the pair. Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        Self::try_new(a, b).expect("edge endpoints must differ")
    }

    pub fn try_new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { a, b }),
            std::cmp::Ordering::Greater => Some(Self { a: b, b: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`.
    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Faces incident to an edge. The first face traverses the edge as `a -> b`
/// or `b -> a`; `second` is `None` on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeFaces {
    pub first: usize,
    pub second: Option<usize>,
}

impl EdgeFaces {
    pub fn is_boundary(&self) -> bool {
        self.second.is_none()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.first).chain(self.second)
    }
}

#[derive(Debug, Clone, Default)]
struct VertexRing {
    /// Neighbors in counter-clockwise order; a path for boundary vertices.
    neighbors: Vec<usize>,
    /// `faces[i]` spans `neighbors[i]` and `neighbors[i + 1]` (cyclically for
    /// interior vertices).
    faces: Vec<usize>,
    boundary: bool,
}

#[derive(Debug, Clone)]
pub struct TriMesh {
    positions: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    edges: Vec<EdgeKey>,
    edge_lookup: HashMap<EdgeKey, usize>,
    edge_faces: Vec<EdgeFaces>,
    halfedges: HashMap<(usize, usize), usize>,
    rings: Vec<VertexRing>,
}

/// Corner pairs of a triangle in winding order.
pub(crate) fn face_halfedges(face: [usize; 3]) -> [(usize, usize); 3] {
    [(face[0], face[1]), (face[1], face[2]), (face[2], face[0])]
}

/// Builds a mesh from positions and counter-clockwise index triples.
pub fn build_mesh(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<TriMesh, MeshError> {
    TriMesh::new(positions, faces)
}

impl TriMesh {
    pub fn new(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        let count = positions.len();
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&index) = f.iter().find(|&&i| i >= count) {
                return Err(MeshError::IndexOutOfRange {
                    face: fi,
                    index,
                    count,
                });
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(MeshError::DegenerateFace {
                    face: fi,
                    indices: *f,
                });
            }
        }

        let mut halfedges: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3);
        let mut incidence: HashMap<EdgeKey, Vec<usize>> = HashMap::with_capacity(faces.len() * 2);
        for (fi, f) in faces.iter().enumerate() {
            for (a, b) in face_halfedges(*f) {
                incidence.entry(EdgeKey::new(a, b)).or_default().push(fi);
            }
        }
        let mut edges: Vec<EdgeKey> = incidence.keys().copied().collect();
        edges.sort_unstable();
        for edge in &edges {
            let fs = &incidence[edge];
            if fs.len() > 2 {
                return Err(MeshError::NonManifold {
                    edge: *edge,
                    faces: fs.len(),
                });
            }
        }
        for (fi, f) in faces.iter().enumerate() {
            for (a, b) in face_halfedges(*f) {
                if let Some(&first) = halfedges.get(&(a, b)) {
                    return Err(MeshError::InconsistentOrientation {
                        edge: EdgeKey::new(a, b),
                        first,
                        second: fi,
                    });
                }
                halfedges.insert((a, b), fi);
            }
        }

        let edge_lookup: HashMap<EdgeKey, usize> =
            edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let edge_faces = edges
            .iter()
            .map(|e| {
                let fs = &incidence[e];
                EdgeFaces {
                    first: fs[0],
                    second: fs.get(1).copied(),
                }
            })
            .collect();

        let rings = build_rings(count, &faces)?;

        Ok(Self {
            positions,
            faces,
            edges,
            edge_lookup,
            edge_faces,
            halfedges,
            rings,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> Vec3 {
        self.positions[v]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    /// All edges in canonical (sorted) order.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge_id(&self, e: EdgeKey) -> Option<usize> {
        self.edge_lookup.get(&e).copied()
    }

    pub fn has_edge(&self, e: EdgeKey) -> bool {
        self.edge_lookup.contains_key(&e)
    }

    pub fn edge_faces(&self, e: EdgeKey) -> Option<EdgeFaces> {
        self.edge_id(e).map(|i| self.edge_faces[i])
    }

    pub fn edge_faces_by_id(&self, id: usize) -> EdgeFaces {
        self.edge_faces[id]
    }

    pub fn is_boundary_edge(&self, e: EdgeKey) -> bool {
        self.edge_faces(e).is_some_and(|ef| ef.is_boundary())
    }

    /// Face that traverses the directed edge `a -> b`.
    pub fn halfedge_face(&self, a: usize, b: usize) -> Option<usize> {
        self.halfedges.get(&(a, b)).copied()
    }

    /// The corner of face `f` opposite to the edge `e`.
    pub fn opposite_vertex(&self, f: usize, e: EdgeKey) -> usize {
        let face = self.faces[f];
        *face
            .iter()
            .find(|&&v| !e.contains(v))
            .expect("face contains the edge")
    }

    /// Neighbors of `v` in counter-clockwise order (an open path on the
    /// boundary, a cycle otherwise).
    pub fn one_ring(&self, v: usize) -> &[usize] {
        &self.rings[v].neighbors
    }

    /// Faces around `v`, aligned with [`TriMesh::one_ring`].
    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.rings[v].faces
    }

    pub fn valence(&self, v: usize) -> usize {
        self.rings[v].neighbors.len()
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.rings[v].boundary
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.rings[v].neighbors.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.edge_faces.iter().all(|ef| !ef.is_boundary())
    }

    pub fn boundary_edge_count(&self) -> usize {
        self.edge_faces.iter().filter(|ef| ef.is_boundary()).count()
    }

    /// Edges incident to `v`, in one-ring order.
    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = EdgeKey> + '_ {
        self.rings[v].neighbors.iter().map(move |&n| EdgeKey::new(v, n))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Returns a copy with the same connectivity and new positions.
    pub fn with_positions(&self, positions: Vec<Vec3>) -> Self {
        assert_eq!(positions.len(), self.positions.len());
        Self {
            positions,
            ..self.clone()
        }
    }

    pub fn into_parts(self) -> (Vec<Vec3>, Vec<[usize; 3]>) {
        (self.positions, self.faces)
    }
}

pub fn euler_characteristic(mesh: &TriMesh) -> i64 {
    mesh.euler_characteristic()
}

pub fn one_ring(mesh: &TriMesh, v: usize) -> &[usize] {
    mesh.one_ring(v)
}

fn build_rings(count: usize, faces: &[[usize; 3]]) -> Result<Vec<VertexRing>, MeshError> {
    // For every corner v of face (v, x, y): the wedge x -> y around v.
    let mut wedges: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); count];
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            wedges[f[k]].push((f[(k + 1) % 3], f[(k + 2) % 3], fi));
        }
    }

    let mut rings = Vec::with_capacity(count);
    for (v, mut fan) in wedges.into_iter().enumerate() {
        if fan.is_empty() {
            rings.push(VertexRing::default());
            continue;
        }
        fan.sort_unstable();
        let find = |x: usize, fan: &[(usize, usize, usize)]| {
            fan.binary_search_by(|w| w.0.cmp(&x)).ok()
        };
        // A wedge whose start is not the end of any other wedge opens the fan.
        let mut ends: Vec<usize> = fan.iter().map(|w| w.1).collect();
        ends.sort_unstable();
        let starts: Vec<usize> = fan
            .iter()
            .map(|w| w.0)
            .filter(|x| ends.binary_search(x).is_err())
            .collect();
        if starts.len() > 1 {
            return Err(MeshError::NonManifoldVertex { vertex: v });
        }
        let boundary = !starts.is_empty();
        let first = if boundary { starts[0] } else { fan[0].0 };

        let mut neighbors = Vec::with_capacity(fan.len() + 1);
        let mut ring_faces = Vec::with_capacity(fan.len());
        let mut current = first;
        while let Some(i) = find(current, &fan) {
            let (x, y, fi) = fan[i];
            neighbors.push(x);
            ring_faces.push(fi);
            current = y;
            if current == first || ring_faces.len() > fan.len() {
                break;
            }
        }
        if ring_faces.len() != fan.len() {
            return Err(MeshError::NonManifoldVertex { vertex: v });
        }
        if boundary {
            neighbors.push(current);
        } else if current != first {
            return Err(MeshError::NonManifoldVertex { vertex: v });
        }
        rings.push(VertexRing {
            neighbors,
            faces: ring_faces,
            boundary,
        });
    }
    Ok(rings)
}

/// One problem found by [`validate_manifold`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { face: usize, index: usize },
    DegenerateFace { face: usize },
    NonManifoldEdge { edge: EdgeKey, faces: usize },
    InconsistentOrientation { edge: EdgeKey },
    NonManifoldVertex { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    IsolatedVertex { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IndexOutOfRange { face, index } => {
                write!(f, "face {face}: vertex index {index} out of range")
            }
            Violation::DegenerateFace { face } => write!(f, "face {face}: repeated vertex index"),
            Violation::NonManifoldEdge { edge, faces } => {
                write!(f, "edge {edge}: shared by {faces} faces")
            }
            Violation::InconsistentOrientation { edge } => {
                write!(f, "edge {edge}: adjacent faces have inconsistent winding")
            }
            Violation::NonManifoldVertex { vertex } => {
                write!(f, "vertex {vertex}: incident faces do not form a single fan")
            }
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::IsolatedVertex { vertex } => write!(f, "vertex {vertex}: not referenced by any face"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.warnings.is_empty()
    }
}

/// Lists every combinatorial problem in a raw face list instead of stopping
/// at the first one.
pub fn validate_manifold(vertex_count: usize, faces: &[[usize; 3]]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut referenced = vec![false; vertex_count];
    let mut usable = Vec::with_capacity(faces.len());
    for (fi, f) in faces.iter().enumerate() {
        let mut ok = true;
        for &i in f {
            if i >= vertex_count {
                report
                    .violations
                    .push(Violation::IndexOutOfRange { face: fi, index: i });
                ok = false;
            } else {
                referenced[i] = true;
            }
        }
        if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
            report.violations.push(Violation::DegenerateFace { face: fi });
            ok = false;
        }
        if ok {
            usable.push(*f);
        }
    }

    let mut incidence: HashMap<EdgeKey, Vec<(usize, usize)>> = HashMap::new();
    for f in &usable {
        for (a, b) in face_halfedges(*f) {
            incidence.entry(EdgeKey::new(a, b)).or_default().push((a, b));
        }
    }
    let mut edges: Vec<_> = incidence.into_iter().collect();
    edges.sort_unstable_by_key(|(e, _)| *e);
    let mut bad_edge = false;
    for (edge, uses) in &edges {
        if uses.len() > 2 {
            report.violations.push(Violation::NonManifoldEdge {
                edge: *edge,
                faces: uses.len(),
            });
            bad_edge = true;
        } else if uses.len() == 2 && uses[0] == uses[1] {
            report
                .violations
                .push(Violation::InconsistentOrientation { edge: *edge });
            bad_edge = true;
        }
    }
    // Vertex fans are only meaningful once the edges are sound.
    if !bad_edge {
        if let Err(MeshError::NonManifoldVertex { .. }) = build_rings(vertex_count, &usable) {
            for v in 0..vertex_count {
                let star: Vec<[usize; 3]> =
                    usable.iter().filter(|f| f.contains(&v)).copied().collect();
                if build_rings(vertex_count, &star).is_err() {
                    report.violations.push(Violation::NonManifoldVertex { vertex: v });
                }
            }
        }
    }
    for (v, r) in referenced.iter().enumerate() {
        if !r {
            report.warnings.push(Warning::IsolatedVertex { vertex: v });
        }
    }
    report
}
