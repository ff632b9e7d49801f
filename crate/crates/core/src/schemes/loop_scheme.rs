use crate::mesh::{EdgeKey, TriMesh};
use crate::stencil;
use crate::tagging::{self, RuleOptions, SharpnessTags};

use super::{interior_edge_point, split_face, vertex_image, AlphaPolicy, EdgeRule, Provenance, Refinement, SchemeError};

/// One Loop step: every face split 1-to-4.
///
/// Crease and boundary edges get midpoints, interior edges the four-point
/// mask. Old vertices follow the corner, crease or smooth vertex rule.
/// Tagged edges pass their tag to both halves and sharp faces to all four
/// children; the children of face `f` are faces `4f..4f + 4`.
pub fn loop_step(mesh: &TriMesh, tags: &SharpnessTags, opts: RuleOptions) -> Result<Refinement, SchemeError> {
    tags.validate(mesh)?;
    let nv = mesh.vertex_count();
    let edges = mesh.edges();

    let mut positions = Vec::with_capacity(nv + edges.len());
    let mut provenance = Vec::with_capacity(nv + edges.len());
    for v in 0..nv {
        let (p, rule) = vertex_image(mesh, tags, v, opts, AlphaPolicy::Buckets)?;
        positions.push(p);
        provenance.push(Provenance::OldVertexImage { vertex: v, rule });
    }
    for (id, e) in edges.iter().enumerate() {
        let ef = mesh.edge_faces_by_id(id);
        let (p, rule) = if ef.is_boundary() || tagging::is_crease_edge(mesh, tags, *e, opts) {
            (
                stencil::crease_odd_point(mesh.position(e.a()), mesh.position(e.b())),
                EdgeRule::CreaseMidpoint,
            )
        } else {
            interior_edge_point(mesh, *e, ef, opts)?
        };
        positions.push(p);
        provenance.push(Provenance::EdgePoint { edge: *e, rule });
    }
    let point = |a: usize, b: usize| nv + mesh.edge_id(EdgeKey::new(a, b)).expect("mesh edge");

    let mut faces = Vec::with_capacity(4 * mesh.face_count());
    for face in mesh.faces() {
        let [a, b, c] = *face;
        faces.extend(split_face(*face, [point(a, b), point(b, c), point(c, a)]));
    }

    let mut out_tags = SharpnessTags::new();
    for e in &tags.sharp_edges {
        let m = point(e.a(), e.b());
        out_tags.sharp_edges.insert(EdgeKey::new(e.a(), m));
        out_tags.sharp_edges.insert(EdgeKey::new(m, e.b()));
    }
    for &f in &tags.sharp_faces {
        out_tags.sharp_faces.extend(4 * f..4 * f + 4);
    }

    Ok(Refinement {
        mesh: TriMesh::new(positions, faces)?,
        tags: out_tags,
        provenance,
    })
}
