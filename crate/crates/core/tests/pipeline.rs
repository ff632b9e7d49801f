//! File-based runs: read a mesh and its tags, refine, write, read back.

mod common;

use crease_subdiv::io::{self, IoError};
use crease_subdiv::{shapes, subdivide, RuleOptions, SchemeError, SchemeKind, SharpnessTags};

#[test]
fn refine_from_files_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let (mesh, tags, _) = common::patch_with_polyline();
    let obj = dir.path().join("patch.obj");
    let tag_file = dir.path().join("patch.tags");
    io::write_obj(&mesh, &obj).unwrap();
    io::write_tags(&tags, &tag_file).unwrap();

    let mesh = io::read_obj(&obj).unwrap();
    let tags = io::read_tags(&tag_file, &mesh).unwrap();
    let recs = subdivide(mesh, tags, SchemeKind::Hybrid, 2, RuleOptions::default()).unwrap();
    for r in &recs {
        let o = dir.path().join(format!("l{}.obj", r.level));
        let t = dir.path().join(format!("l{}.tags", r.level));
        io::write_obj(&r.mesh, &o).unwrap();
        io::write_tags(&r.tags, &t).unwrap();
        let m = io::read_obj(&o).unwrap();
        assert_eq!(m.faces(), r.mesh.faces());
        assert_eq!(io::read_tags(&t, &m).unwrap(), r.tags);
    }
}

#[test]
fn hand_written_obj_normalizes() {
    let text = "# exported\no thing\nv 0 0 0\nv 1 0 0 1.0\nvt 0 0\nv 0 1 0\nvn 0 0 1\n\nf 1/1/1 2/1/1 3/1/1\n";
    let mesh = io::parse_obj(text).unwrap().into_mesh().unwrap();
    let canonical = io::format_obj(&mesh);
    assert_eq!(canonical, io::format_obj(&shapes::single_triangle()));
    let again = io::parse_obj(&canonical).unwrap().into_mesh().unwrap();
    assert_eq!(io::format_obj(&again), canonical);
}

#[test]
fn tags_from_another_mesh_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let (_, tags, _) = common::patch_with_polyline();
    let t = dir.path().join("patch.tags");
    io::write_tags(&tags, &t).unwrap();
    let err = io::read_tags(&t, &shapes::icosahedron()).unwrap_err();
    assert!(err.is_tag_mismatch(), "{err}");

    let mut stray = SharpnessTags::new();
    stray.sharp_faces.insert(99);
    let err = subdivide(shapes::icosahedron(), stray, SchemeKind::Hybrid, 1, RuleOptions::default()).unwrap_err();
    assert!(matches!(err, SchemeError::TagMeshMismatch(_)), "{err}");
}

#[test]
fn missing_file_is_an_io_error() {
    let err = io::read_obj("/nonexistent/mesh.obj").unwrap_err();
    assert!(matches!(err, IoError::Io { .. }), "{err}");
}
