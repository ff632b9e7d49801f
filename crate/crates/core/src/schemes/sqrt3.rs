use crate::mesh::{face_halfedges, EdgeKey, TriMesh};
use crate::stencil;
use crate::tagging::{RuleOptions, SharpnessTags};

use super::{vertex_image, AlphaPolicy, EdgeRule, Provenance, Refinement, SchemeError};

/// One Sqrt(3) step: a centroid per face, old vertices relaxed, every
/// interior old edge flipped to join the centroids on either side.
///
/// Boundary edges cannot be flipped. With `boundary_as_crease` they are split
/// at their midpoint and the boundary vertices follow the crease rule;
/// otherwise the boundary edge is kept and fanned to the centroid.
pub fn sqrt3_step(mesh: &TriMesh, opts: RuleOptions) -> Result<Refinement, SchemeError> {
    let nv = mesh.vertex_count();
    let nf = mesh.face_count();
    let no_tags = SharpnessTags::new();

    let split: Vec<EdgeKey> = if opts.boundary_as_crease {
        mesh.edges()
            .iter()
            .copied()
            .filter(|e| mesh.is_boundary_edge(*e))
            .collect()
    } else {
        Vec::new()
    };

    let mut positions = Vec::with_capacity(nv + nf + split.len());
    let mut provenance = Vec::with_capacity(nv + nf + split.len());
    for v in 0..nv {
        let (p, rule) = vertex_image(mesh, &no_tags, v, opts, AlphaPolicy::Sqrt3)?;
        positions.push(p);
        provenance.push(Provenance::OldVertexImage { vertex: v, rule });
    }
    for (f, face) in mesh.faces().iter().enumerate() {
        positions.push(stencil::face_centroid(face.map(|i| mesh.position(i))));
        provenance.push(Provenance::FaceCentroid { face: f });
    }
    for e in &split {
        positions.push(stencil::crease_odd_point(mesh.position(e.a()), mesh.position(e.b())));
        provenance.push(Provenance::EdgePoint {
            edge: *e,
            rule: EdgeRule::CreaseMidpoint,
        });
    }
    let midpoint = |e: EdgeKey| {
        split
            .binary_search(&e)
            .map(|i| nv + nf + i)
            .expect("split edge")
    };

    let mut faces = Vec::with_capacity(3 * nf + split.len());
    for (f, face) in mesh.faces().iter().enumerate() {
        let p = nv + f;
        for (a, b) in face_halfedges(*face) {
            match mesh.halfedge_face(b, a) {
                Some(g) => faces.push([p, a, nv + g]),
                None if opts.boundary_as_crease => {
                    let m = midpoint(EdgeKey::new(a, b));
                    faces.push([a, m, p]);
                    faces.push([m, b, p]);
                }
                None => faces.push([a, b, p]),
            }
        }
    }

    Ok(Refinement {
        mesh: TriMesh::new(positions, faces)?,
        tags: SharpnessTags::new(),
        provenance,
    })
}
