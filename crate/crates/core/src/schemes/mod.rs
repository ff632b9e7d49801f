//! Refinement operators: pure Sqrt(3), Loop with crease rules, and the
//! feature-preserving hybrid of the two.
//!
//! Every operator lays out the refined vertices the same way:
//!
//! ```text
//! [images of old vertices, by old index]
//! ++ [face points, by face index]
//! ++ [edge points, by canonical edge order]
//! ```
//!
//! so an old vertex keeps its index on every level, and two operators that
//! agree on which elements get new points produce identical index layouts.

mod hybrid;
mod loop_scheme;
mod sqrt3;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::mesh::{EdgeFaces, EdgeKey, MeshError, TriMesh, Vec3};
use crate::stencil::{self, StencilError, ValenceKind};
use crate::tagging::{self, RuleOptions, SharpnessTags, TagError, VertexKind};

pub use hybrid::{hybrid_refine, hybrid_step};
pub use loop_scheme::loop_step;
pub use sqrt3::sqrt3_step;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("refined connectivity is invalid: {0}")]
    Mesh(#[from] MeshError),
    #[error("tags do not match the mesh: {0}")]
    TagMeshMismatch(#[from] TagError),
    #[error(transparent)]
    Stencil(#[from] StencilError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Sqrt3,
    Loop,
    Hybrid,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Sqrt3 => "sqrt3",
            SchemeKind::Loop => "loop",
            SchemeKind::Hybrid => "hybrid",
        })
    }
}

impl FromStr for SchemeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sqrt3" => Ok(SchemeKind::Sqrt3),
            "loop" => Ok(SchemeKind::Loop),
            "hybrid" => Ok(SchemeKind::Hybrid),
            other => Err(format!("unknown scheme `{other}` (expected sqrt3, loop or hybrid)")),
        }
    }
}

/// Rule that positioned the image of an old vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRule {
    /// Weighted average with the one-ring.
    Smooth,
    /// Boundary vertex averaged with its one-ring (boundary not a crease).
    Boundary,
    /// Cubic B-spline rule along the crease.
    Crease,
    /// Interpolated.
    Corner,
    /// Isolated or too small a neighborhood to move.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRule {
    /// Midpoint of a crease or boundary edge.
    CreaseMidpoint,
    /// Four-point Loop mask.
    LoopInterior,
    /// Loop mask with valence-dependent endpoint weights.
    ModifiedLoop,
}

/// Where a vertex of a refined mesh came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Vertex of the unrefined input.
    Input { vertex: usize },
    OldVertexImage { vertex: usize, rule: VertexRule },
    FaceCentroid { face: usize },
    EdgePoint { edge: EdgeKey, rule: EdgeRule },
}

/// Output of a single refinement step.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub mesh: TriMesh,
    pub tags: SharpnessTags,
    pub provenance: Vec<Provenance>,
}

/// One level of a subdivision sequence.
#[derive(Debug, Clone)]
pub struct SubdivisionRecord {
    pub level: usize,
    pub mesh: TriMesh,
    pub tags: SharpnessTags,
    pub provenance: Vec<Provenance>,
}

impl SubdivisionRecord {
    /// Level-0 record for an input mesh.
    pub fn input(mesh: TriMesh, tags: SharpnessTags) -> Self {
        let provenance = (0..mesh.vertex_count())
            .map(|vertex| Provenance::Input { vertex })
            .collect();
        Self {
            level: 0,
            mesh,
            tags,
            provenance,
        }
    }

    fn next(&self, r: Refinement) -> Self {
        Self {
            level: self.level + 1,
            mesh: r.mesh,
            tags: r.tags,
            provenance: r.provenance,
        }
    }
}

/// Refines `levels` times and returns the records for levels `0..=levels`.
pub fn subdivide(
    mesh: TriMesh,
    tags: SharpnessTags,
    scheme: SchemeKind,
    levels: usize,
    opts: RuleOptions,
) -> Result<Vec<SubdivisionRecord>, SchemeError> {
    tags.validate(&mesh)?;
    let mut records = vec![SubdivisionRecord::input(mesh, tags)];
    for _ in 0..levels {
        let last = records.last().expect("non-empty");
        let next = step(scheme, last, opts)?;
        records.push(next);
    }
    Ok(records)
}

/// Applies one step of `scheme` to a record.
pub fn step(scheme: SchemeKind, record: &SubdivisionRecord, opts: RuleOptions) -> Result<SubdivisionRecord, SchemeError> {
    let r = match scheme {
        SchemeKind::Sqrt3 => sqrt3_step(&record.mesh, opts)?,
        SchemeKind::Loop => loop_step(&record.mesh, &record.tags, opts)?,
        SchemeKind::Hybrid => hybrid_refine(&record.mesh, &record.tags, opts)?,
    };
    Ok(record.next(r))
}

/// Which weight the smooth vertex rule uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum AlphaPolicy {
    /// Kobbelt's weight at every valence.
    Sqrt3,
    /// The valence buckets of [`stencil::alpha`].
    Buckets,
    /// Kobbelt's weight away from features, buckets next to them.
    Hybrid,
}

pub(crate) fn vertex_image(
    mesh: &TriMesh,
    tags: &SharpnessTags,
    v: usize,
    opts: RuleOptions,
    policy: AlphaPolicy,
) -> Result<(Vec3, VertexRule), StencilError> {
    let class = tagging::classify_vertex_with(mesh, tags, v, opts);
    let p = mesh.position(v);
    let ring = || -> Vec<Vec3> { mesh.one_ring(v).iter().map(|&n| mesh.position(n)).collect() };
    Ok(match class.kind {
        VertexKind::Isolated => (p, VertexRule::Fixed),
        VertexKind::Corner => (p, VertexRule::Corner),
        VertexKind::Crease => {
            let cn = tagging::crease_neighbors(mesh, tags, v, opts);
            debug_assert_eq!(cn.len(), 2);
            let q = stencil::crease_even_update(mesh.position(cn[0]), p, mesh.position(cn[1]));
            (q, VertexRule::Crease)
        }
        VertexKind::Boundary => {
            if class.n < 3 {
                (p, VertexRule::Fixed)
            } else {
                let a = stencil::alpha(class.n, ValenceKind::Boundary)?;
                (stencil::update_vertex(p, &ring(), a)?, VertexRule::Boundary)
            }
        }
        VertexKind::SmoothInterior => {
            let a = match policy {
                AlphaPolicy::Sqrt3 => stencil::sqrt3_alpha(class.n)?,
                AlphaPolicy::Buckets => stencil::alpha(class.n, ValenceKind::Interior)?,
                AlphaPolicy::Hybrid => {
                    if tagging::touches_feature(mesh, tags, v) {
                        stencil::alpha(class.n, ValenceKind::Interior)?
                    } else {
                        stencil::sqrt3_alpha(class.n)?
                    }
                }
            };
            (stencil::update_vertex(p, &ring(), a)?, VertexRule::Smooth)
        }
    })
}

/// Edge point of an interior edge from the Loop mask, optionally with the
/// modified endpoint weights next to a vertex of valence above six.
pub(crate) fn interior_edge_point(
    mesh: &TriMesh,
    e: EdgeKey,
    ef: EdgeFaces,
    opts: RuleOptions,
) -> Result<(Vec3, EdgeRule), StencilError> {
    let second = ef.second.expect("interior edge");
    let (a, b) = (e.a(), e.b());
    let c = mesh.position(mesh.opposite_vertex(ef.first, e));
    let d = mesh.position(mesh.opposite_vertex(second, e));
    if opts.modified_odd_mask {
        let (na, nb) = (mesh.valence(a), mesh.valence(b));
        let major = match (na > 6, nb > 6) {
            (true, false) => Some((a, b, na)),
            (false, true) => Some((b, a, nb)),
            _ => None,
        };
        if let Some((x, y, n)) = major {
            let q = stencil::modified_edge_point(mesh.position(x), mesh.position(y), c, d, n)?;
            return Ok((q, EdgeRule::ModifiedLoop));
        }
    }
    let q = stencil::loop_interior_edge_point(mesh.position(a), mesh.position(b), c, d);
    Ok((q, EdgeRule::LoopInterior))
}

/// The four children of a 1-to-4 split of face `[a, b, c]` with edge points
/// `m_ab`, `m_bc`, `m_ca`: the three corner triangles, then the middle one.
pub(crate) fn split_face(f: [usize; 3], m: [usize; 3]) -> [[usize; 3]; 4] {
    let [a, b, c] = f;
    let [ab, bc, ca] = m;
    [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
}
