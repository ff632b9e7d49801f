//! Sharpness tags and the element classification that drives rule dispatch.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::mesh::{EdgeKey, TriMesh};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TagError {
    #[error("edge {0} is not an edge of the mesh")]
    UnknownEdge(EdgeKey),
    #[error("face index {index} out of range (mesh has {count} faces)")]
    FaceIndexOutOfRange { index: usize, count: usize },
}

/// Tagged sharp edges and sharp faces.
///
/// The two sets are independent: a face whose three edges are tagged is
/// still refined as a smooth face unless the face itself is tagged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SharpnessTags {
    pub sharp_edges: BTreeSet<EdgeKey>,
    pub sharp_faces: BTreeSet<usize>,
}

impl SharpnessTags {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_edges(edges: impl IntoIterator<Item = EdgeKey>) -> Self {
        Self {
            sharp_edges: edges.into_iter().collect(),
            sharp_faces: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sharp_edges.is_empty() && self.sharp_faces.is_empty()
    }

    pub fn is_sharp_edge(&self, e: EdgeKey) -> bool {
        self.sharp_edges.contains(&e)
    }

    pub fn is_sharp_face(&self, f: usize) -> bool {
        self.sharp_faces.contains(&f)
    }

    /// Tags every edge along a vertex path.
    pub fn tag_path(&mut self, path: &[usize]) {
        for w in path.windows(2) {
            self.sharp_edges.insert(EdgeKey::new(w[0], w[1]));
        }
    }

    /// Tags every face of the mesh as sharp.
    pub fn all_faces(mesh: &TriMesh) -> Self {
        Self {
            sharp_edges: BTreeSet::new(),
            sharp_faces: (0..mesh.face_count()).collect(),
        }
    }

    /// Checks every tag against the mesh.
    pub fn validate(&self, mesh: &TriMesh) -> Result<(), TagError> {
        if let Some(e) = self.sharp_edges.iter().find(|e| !mesh.has_edge(**e)) {
            return Err(TagError::UnknownEdge(*e));
        }
        if let Some(&f) = self.sharp_faces.iter().find(|&&f| f >= mesh.face_count()) {
            return Err(TagError::FaceIndexOutOfRange {
                index: f,
                count: mesh.face_count(),
            });
        }
        Ok(())
    }
}

/// Switches that change how elements are classified and refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleOptions {
    /// Treat mesh boundary edges as crease edges.
    pub boundary_as_crease: bool,
    /// Use the valence-dependent interior odd mask next to vertices of
    /// valence above six.
    pub modified_odd_mask: bool,
}

impl Default for RuleOptions {
    fn default() -> Self {
        Self {
            boundary_as_crease: true,
            modified_odd_mask: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    SmoothInterior,
    /// Exactly two incident crease edges.
    Crease,
    /// Three or more incident crease edges.
    Corner,
    /// On the mesh boundary but neither crease nor corner; only reachable
    /// when the boundary is not treated as a crease.
    Boundary,
    /// Not referenced by any face.
    Isolated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexClass {
    pub kind: VertexKind,
    /// Valence.
    pub n: usize,
    /// Number of incident tagged edges.
    pub e_sh: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    /// Untagged edge between two smooth faces; flipped by the Sqrt(3) step.
    SmoothSmooth,
    /// Tagged edge between two smooth faces.
    SharpBetweenSmooth,
    /// Exactly one adjacent face is sharp.
    MixedSmoothSharp,
    /// Both adjacent faces are sharp.
    SharpSharp,
    BoundaryEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceClass {
    SmoothFace,
    SharpFace,
}

pub fn classify_face(mesh: &TriMesh, tags: &SharpnessTags, f: usize) -> FaceClass {
    debug_assert!(f < mesh.face_count());
    if tags.is_sharp_face(f) {
        FaceClass::SharpFace
    } else {
        FaceClass::SmoothFace
    }
}

pub fn classify_edge(mesh: &TriMesh, tags: &SharpnessTags, e: EdgeKey) -> Result<EdgeClass, TagError> {
    let ef = mesh.edge_faces(e).ok_or(TagError::UnknownEdge(e))?;
    let Some(second) = ef.second else {
        return Ok(EdgeClass::BoundaryEdge);
    };
    let sharp = [ef.first, second]
        .iter()
        .filter(|&&f| tags.is_sharp_face(f))
        .count();
    Ok(match sharp {
        2 => EdgeClass::SharpSharp,
        1 => EdgeClass::MixedSmoothSharp,
        _ if tags.is_sharp_edge(e) => EdgeClass::SharpBetweenSmooth,
        _ => EdgeClass::SmoothSmooth,
    })
}

pub fn sharp_edge_count(mesh: &TriMesh, tags: &SharpnessTags, v: usize) -> usize {
    mesh.incident_edges(v)
        .filter(|e| tags.is_sharp_edge(*e))
        .count()
}

/// Whether an edge is refined with the curve rules: tagged, or a boundary
/// edge when the boundary counts as a crease.
pub fn is_crease_edge(mesh: &TriMesh, tags: &SharpnessTags, e: EdgeKey, opts: RuleOptions) -> bool {
    tags.is_sharp_edge(e) || (opts.boundary_as_crease && mesh.is_boundary_edge(e))
}

/// Neighbors of `v` reached through crease edges, in one-ring order.
pub fn crease_neighbors(mesh: &TriMesh, tags: &SharpnessTags, v: usize, opts: RuleOptions) -> Vec<usize> {
    mesh.one_ring(v)
        .iter()
        .copied()
        .filter(|&n| is_crease_edge(mesh, tags, EdgeKey::new(v, n), opts))
        .collect()
}

pub fn classify_vertex(mesh: &TriMesh, tags: &SharpnessTags, v: usize) -> VertexClass {
    classify_vertex_with(mesh, tags, v, RuleOptions::default())
}

pub fn classify_vertex_with(
    mesh: &TriMesh,
    tags: &SharpnessTags,
    v: usize,
    opts: RuleOptions,
) -> VertexClass {
    let n = mesh.valence(v);
    let e_sh = sharp_edge_count(mesh, tags, v);
    let creases = mesh
        .incident_edges(v)
        .filter(|e| is_crease_edge(mesh, tags, *e, opts))
        .count();
    let kind = if n == 0 {
        VertexKind::Isolated
    } else if creases >= 3 {
        VertexKind::Corner
    } else if creases == 2 {
        VertexKind::Crease
    } else if mesh.is_boundary_vertex(v) {
        VertexKind::Boundary
    } else {
        VertexKind::SmoothInterior
    };
    VertexClass { kind, n, e_sh }
}

/// Whether `v` touches any tagged edge or sharp face.
pub fn touches_feature(mesh: &TriMesh, tags: &SharpnessTags, v: usize) -> bool {
    mesh.vertex_faces(v).iter().any(|&f| tags.is_sharp_face(f))
        || mesh.incident_edges(v).any(|e| tags.is_sharp_edge(e))
}
