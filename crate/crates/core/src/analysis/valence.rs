use crate::mesh::TriMesh;
use crate::schemes::{subdivide, Provenance, SchemeKind, SubdivisionRecord};
use crate::tagging::{self, RuleOptions, SharpnessTags};

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrackedKind {
    /// Input vertex without tagged edges.
    Untagged,
    /// Input vertex on at least one tagged edge.
    SharpEdgeVertex,
    /// Point inserted on a tagged edge by the first step.
    SharpEdgeMidpoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackedVertex {
    /// Index of the vertex; stable from its birth level on.
    pub vertex: usize,
    pub kind: TrackedKind,
    pub birth_level: usize,
    /// Tagged edges at the vertex when it appears.
    pub sharp_edges: usize,
    /// Valence at each level from `birth_level` on.
    pub valences: Vec<usize>,
    /// `val(l) - val(l - 1) - sharp_edges` for each level after birth.
    pub residuals: Vec<i64>,
    /// Every incident face is smooth at every level.
    pub smooth_neighborhood: bool,
    pub on_boundary: bool,
}

impl TrackedVertex {
    pub fn law_holds(&self) -> bool {
        self.residuals.iter().all(|&r| r == 0)
    }

    /// Whether the growth law is expected to hold exactly here: an interior
    /// vertex whose faces are all smooth.
    pub fn law_applies(&self) -> bool {
        self.smooth_neighborhood && !self.on_boundary
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValenceTrace {
    pub levels: usize,
    pub vertices: Vec<TrackedVertex>,
}

impl ValenceTrace {
    /// Vertices where the law applies but does not hold.
    pub fn violations(&self) -> impl Iterator<Item = &TrackedVertex> {
        self.vertices.iter().filter(|v| v.law_applies() && !v.law_holds())
    }

    pub fn of_kind(&self, kind: TrackedKind) -> impl Iterator<Item = &TrackedVertex> {
        self.vertices.iter().filter(move |v| v.kind == kind)
    }
}

/// Valence of every input vertex and of every first-level point on a tagged
/// edge through `levels` hybrid steps, against the growth law
/// `val(l) = val(l - 1) + E_sh`.
pub fn valence_trace(
    mesh: &TriMesh,
    tags: &SharpnessTags,
    levels: usize,
    opts: RuleOptions,
) -> Result<ValenceTrace, AnalysisError> {
    if levels == 0 {
        return Err(AnalysisError::InvalidInput("at least one level is required".into()));
    }
    let records = subdivide(mesh.clone(), tags.clone(), SchemeKind::Hybrid, levels, opts)?;
    let mut vertices = Vec::new();
    let first = &records[0];
    for v in 0..first.mesh.vertex_count() {
        let e_sh = tagging::sharp_edge_count(&first.mesh, &first.tags, v);
        let kind = if e_sh == 0 {
            TrackedKind::Untagged
        } else {
            TrackedKind::SharpEdgeVertex
        };
        vertices.push(track(&records, v, 0, kind, e_sh));
    }
    let born = &records[1];
    for (v, p) in born.provenance.iter().enumerate() {
        if let Provenance::EdgePoint { edge, .. } = p {
            if first.tags.is_sharp_edge(*edge) {
                let e_sh = tagging::sharp_edge_count(&born.mesh, &born.tags, v);
                vertices.push(track(&records, v, 1, TrackedKind::SharpEdgeMidpoint, e_sh));
            }
        }
    }
    Ok(ValenceTrace { levels, vertices })
}

fn track(records: &[SubdivisionRecord], v: usize, birth: usize, kind: TrackedKind, e_sh: usize) -> TrackedVertex {
    let alive = &records[birth..];
    let valences: Vec<usize> = alive.iter().map(|r| r.mesh.valence(v)).collect();
    let residuals = valences
        .windows(2)
        .map(|w| w[1] as i64 - w[0] as i64 - e_sh as i64)
        .collect();
    let smooth_neighborhood = alive
        .iter()
        .all(|r| r.mesh.vertex_faces(v).iter().all(|&f| !r.tags.is_sharp_face(f)));
    TrackedVertex {
        vertex: v,
        kind,
        birth_level: birth,
        sharp_edges: e_sh,
        valences,
        residuals,
        smooth_neighborhood,
        on_boundary: records[birth].mesh.is_boundary_vertex(v),
    }
}
