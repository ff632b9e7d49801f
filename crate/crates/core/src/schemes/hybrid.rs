use crate::mesh::{face_halfedges, EdgeKey, TriMesh};
use crate::stencil;
use crate::tagging::{self, RuleOptions, SharpnessTags};

use super::{
    interior_edge_point, split_face, vertex_image, AlphaPolicy, EdgeRule, Provenance, Refinement, SchemeError,
    SubdivisionRecord,
};

/// One step of the feature-preserving scheme on a record.
pub fn hybrid_step(record: &SubdivisionRecord, opts: RuleOptions) -> Result<SubdivisionRecord, SchemeError> {
    super::step(super::SchemeKind::Hybrid, record, opts)
}

/// One step of the feature-preserving scheme.
///
/// * Smooth faces get a centroid; sharp faces are split 1-to-4 and their
///   children stay sharp.
/// * Old vertices move by the corner, crease or smooth vertex rule.
/// * Tagged edges, crease boundary edges and every edge of a sharp face get
///   an edge point. Tagged and boundary edges use the midpoint, untagged
///   interior edges of sharp faces the Loop mask.
/// * A smooth face fans its centroid to its corners and to the edge points
///   on its split edges. Its remaining interior edges are flipped to join
///   the neighboring centroids. Split edges are never flipped and the halves
///   of a tagged edge stay tagged.
///
/// With no tags this is exactly [`super::sqrt3_step`].
pub fn hybrid_refine(mesh: &TriMesh, tags: &SharpnessTags, opts: RuleOptions) -> Result<Refinement, SchemeError> {
    tags.validate(mesh)?;
    let nv = mesh.vertex_count();
    let nf = mesh.face_count();
    let edges = mesh.edges();

    let split: Vec<bool> = edges
        .iter()
        .enumerate()
        .map(|(id, e)| {
            tagging::is_crease_edge(mesh, tags, *e, opts)
                || mesh.edge_faces_by_id(id).iter().any(|f| tags.is_sharp_face(f))
        })
        .collect();

    let mut face_point = vec![usize::MAX; nf];
    let smooth_faces: Vec<usize> = (0..nf).filter(|f| !tags.is_sharp_face(*f)).collect();
    for (i, &f) in smooth_faces.iter().enumerate() {
        face_point[f] = nv + i;
    }
    let split_ids: Vec<usize> = (0..edges.len()).filter(|&id| split[id]).collect();
    let base = nv + smooth_faces.len();
    let mut edge_point = vec![usize::MAX; edges.len()];
    for (i, &id) in split_ids.iter().enumerate() {
        edge_point[id] = base + i;
    }

    let total = base + split_ids.len();
    let mut positions = Vec::with_capacity(total);
    let mut provenance = Vec::with_capacity(total);
    for v in 0..nv {
        let (p, rule) = vertex_image(mesh, tags, v, opts, AlphaPolicy::Hybrid)?;
        positions.push(p);
        provenance.push(Provenance::OldVertexImage { vertex: v, rule });
    }
    for &f in &smooth_faces {
        positions.push(stencil::face_centroid(mesh.face(f).map(|i| mesh.position(i))));
        provenance.push(Provenance::FaceCentroid { face: f });
    }
    for &id in &split_ids {
        let e = edges[id];
        let ef = mesh.edge_faces_by_id(id);
        let (p, rule) = if ef.is_boundary() || tags.is_sharp_edge(e) {
            (
                stencil::crease_odd_point(mesh.position(e.a()), mesh.position(e.b())),
                EdgeRule::CreaseMidpoint,
            )
        } else {
            interior_edge_point(mesh, e, ef, opts)?
        };
        positions.push(p);
        provenance.push(Provenance::EdgePoint { edge: e, rule });
    }

    let id_of = |a: usize, b: usize| mesh.edge_id(EdgeKey::new(a, b)).expect("mesh edge");
    let mut faces = Vec::with_capacity(4 * nf);
    let mut out_tags = SharpnessTags::new();
    for (f, face) in mesh.faces().iter().enumerate() {
        if tags.is_sharp_face(f) {
            let [a, b, c] = *face;
            let m = [
                edge_point[id_of(a, b)],
                edge_point[id_of(b, c)],
                edge_point[id_of(c, a)],
            ];
            out_tags.sharp_faces.extend(faces.len()..faces.len() + 4);
            faces.extend(split_face(*face, m));
            continue;
        }
        let p = face_point[f];
        for (a, b) in face_halfedges(*face) {
            let id = id_of(a, b);
            if split[id] {
                let m = edge_point[id];
                faces.push([a, m, p]);
                faces.push([m, b, p]);
            } else {
                match mesh.halfedge_face(b, a) {
                    Some(g) => faces.push([p, a, face_point[g]]),
                    None => faces.push([a, b, p]),
                }
            }
        }
    }
    for e in &tags.sharp_edges {
        let m = edge_point[id_of(e.a(), e.b())];
        out_tags.sharp_edges.insert(EdgeKey::new(e.a(), m));
        out_tags.sharp_edges.insert(EdgeKey::new(m, e.b()));
    }

    Ok(Refinement {
        mesh: TriMesh::new(positions, faces)?,
        tags: out_tags,
        provenance,
    })
}
