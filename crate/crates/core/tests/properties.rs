mod common;

use nalgebra::Matrix3;
use proptest::prelude::*;

use crease_subdiv::{io, shapes, subdivide, EdgeKey, RuleOptions, SchemeKind, SharpnessTags, TriMesh, Vec3};

fn scheme() -> impl Strategy<Value = SchemeKind> {
    prop_oneof![Just(SchemeKind::Sqrt3), Just(SchemeKind::Loop), Just(SchemeKind::Hybrid)]
}

fn base_mesh() -> impl Strategy<Value = TriMesh> {
    prop_oneof![
        Just(shapes::grid(4, 3)),
        Just(shapes::icosahedron()),
        Just(shapes::torus(5, 4, 2.0, 0.5)),
        Just(shapes::octahedron()),
    ]
}

/// A mesh with a random subset of its edges and faces tagged.
fn tagged_mesh() -> impl Strategy<Value = (TriMesh, SharpnessTags)> {
    base_mesh().prop_flat_map(|mesh| {
        let e = mesh.edge_count();
        let f = mesh.face_count();
        (
            Just(mesh),
            proptest::collection::btree_set(0..e, 0..=e / 3),
            proptest::collection::btree_set(0..f, 0..=f / 3),
        )
            .prop_map(|(mesh, edges, faces)| {
                let tags = SharpnessTags {
                    sharp_edges: edges.into_iter().map(|i| mesh.edges()[i]).collect(),
                    sharp_faces: faces,
                };
                (mesh, tags)
            })
    })
}

fn affine() -> impl Strategy<Value = (Matrix3<f64>, Vec3)> {
    (proptest::array::uniform9(-2.0..2.0f64), proptest::array::uniform3(-5.0..5.0f64))
        .prop_filter("well conditioned", |(a, _)| Matrix3::from_row_slice(a).determinant().abs() > 0.1)
        .prop_map(|(a, t)| (Matrix3::from_row_slice(&a), Vec3::from(t)))
}

fn transform(mesh: &TriMesh, a: &Matrix3<f64>, t: &Vec3) -> TriMesh {
    mesh.with_positions(mesh.positions().iter().map(|p| a * p + t).collect())
}

fn options() -> impl Strategy<Value = RuleOptions> {
    (any::<bool>(), any::<bool>()).prop_map(|(boundary_as_crease, modified_odd_mask)| RuleOptions {
        boundary_as_crease,
        modified_odd_mask,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinement_commutes_with_affine_maps(
        (mesh, tags) in tagged_mesh(),
        scheme in scheme(),
        (a, t) in affine(),
        opts in options(),
    ) {
        let before = subdivide(transform(&mesh, &a, &t), tags.clone(), scheme, 2, opts).unwrap();
        let after = subdivide(mesh, tags, scheme, 2, opts).unwrap();
        let moved = transform(&after[2].mesh, &a, &t);
        prop_assert_eq!(before[2].mesh.faces(), moved.faces());
        for (p, q) in before[2].mesh.positions().iter().zip(moved.positions()) {
            prop_assert!((p - q).norm() <= 1e-12 * (1.0 + q.norm()), "{:?} vs {:?}", p, q);
        }
    }

    #[test]
    fn euler_characteristic_is_preserved(
        (mesh, tags) in tagged_mesh(),
        scheme in scheme(),
        opts in options(),
    ) {
        let chi = mesh.euler_characteristic();
        let closed = mesh.is_closed();
        for r in subdivide(mesh, tags, scheme, 3, opts).unwrap() {
            prop_assert_eq!(r.mesh.euler_characteristic(), chi);
            prop_assert_eq!(r.mesh.is_closed(), closed);
            prop_assert!(r.tags.validate(&r.mesh).is_ok());
        }
    }

    #[test]
    fn tags_round_trip((mesh, tags) in tagged_mesh()) {
        let text = io::format_tags(&tags);
        let back = io::parse_tags(&text, &mesh).unwrap();
        prop_assert_eq!(&back, &tags);
        prop_assert_eq!(io::format_tags(&back), text);
    }

    #[test]
    fn obj_round_trip_is_bit_exact(coords in proptest::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 36)) {
        let positions: Vec<Vec3> = coords.chunks(3).map(|c| Vec3::new(c[0], c[1], c[2])).collect();
        let mesh = shapes::icosahedron().with_positions(positions);
        let text = io::format_obj(&mesh);
        let back = io::parse_obj(&text).unwrap().into_mesh().unwrap();
        for (p, q) in mesh.positions().iter().zip(back.positions()) {
            for (x, y) in p.iter().zip(q.iter()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        prop_assert_eq!(io::format_obj(&back), text);
    }

    #[test]
    fn constant_meshes_stay_constant(
        (mesh, tags) in tagged_mesh(),
        scheme in scheme(),
        c in proptest::array::uniform3(-10.0..10.0f64),
    ) {
        let c = Vec3::from(c);
        let flat = mesh.with_positions(vec![c; mesh.vertex_count()]);
        let recs = subdivide(flat, tags, scheme, 2, RuleOptions::default()).unwrap();
        for p in recs[2].mesh.positions() {
            prop_assert!((p - c).norm() < 1e-12);
        }
    }
}

#[test]
fn refined_tags_reference_refined_edges() {
    let (mesh, tags, _) = common::patch_with_polyline();
    let recs = subdivide(mesh, tags, SchemeKind::Hybrid, 3, RuleOptions::default()).unwrap();
    for r in &recs {
        let text = io::format_tags(&r.tags);
        assert_eq!(io::parse_tags(&text, &r.mesh).unwrap(), r.tags);
        assert!(r.tags.sharp_edges.iter().all(|e: &EdgeKey| r.mesh.has_edge(*e)));
    }
}
