#![allow(dead_code)]

use crease_subdiv::{shapes, subdivide, RuleOptions, SchemeKind, SharpnessTags, TriMesh, Vec3};

/// `grid(8, 8)` vertex `(i, j)`.
pub fn gv(i: usize, j: usize) -> usize {
    j * 9 + i
}

/// Zig-zag polyline across `grid(8, 8)` from the left border to the right
/// one, using horizontal and diagonal grid edges.
pub fn polyline() -> Vec<usize> {
    [(0, 2), (1, 2), (2, 3), (3, 3), (4, 4), (5, 4), (6, 5), (7, 5), (8, 5)]
        .iter()
        .map(|&(i, j)| gv(i, j))
        .collect()
}

/// Flat 8x8 patch with one tagged polyline lifted out of the plane so the
/// curve rules have something to do.
pub fn patch_with_polyline() -> (TriMesh, SharpnessTags, Vec<usize>) {
    let grid = shapes::grid(8, 8);
    let path = polyline();
    let mut pos = grid.positions().to_vec();
    for (k, &v) in path.iter().enumerate() {
        pos[v].z = 0.25 * ((k * k) % 5) as f64 - 0.5;
    }
    let mut tags = SharpnessTags::new();
    tags.tag_path(&path);
    (grid.with_positions(pos), tags, path)
}

/// Cubic B-spline refinement of an open polyline with fixed ends.
pub fn refine_curve(p: &[Vec3]) -> Vec<Vec3> {
    let last = p.len() - 1;
    let mut out = Vec::with_capacity(2 * p.len() - 1);
    out.push(p[0]);
    for i in 0..last {
        out.push((p[i] + p[i + 1]) * 0.5);
        if i + 1 == last {
            out.push(p[last]);
        } else {
            out.push(p[i] * 0.125 + p[i + 1] * 0.75 + p[i + 2] * 0.125);
        }
    }
    out
}

/// Named meshes with tags, covering closed and bordered inputs, sharp
/// faces and refined outputs.
pub fn corpus() -> Vec<(String, TriMesh, SharpnessTags)> {
    let mut out = vec![
        ("triangle".to_string(), shapes::single_triangle(), SharpnessTags::new()),
        ("tetrahedron".to_string(), shapes::tetrahedron(), SharpnessTags::new()),
        ("octahedron".to_string(), shapes::octahedron(), SharpnessTags::new()),
        ("icosahedron".to_string(), shapes::icosahedron(), SharpnessTags::new()),
        ("torus".to_string(), shapes::torus(8, 6, 2.0, 0.7), SharpnessTags::new()),
    ];
    let (patch, tags, _) = patch_with_polyline();
    out.push(("patch".to_string(), patch.clone(), tags.clone()));
    let mut mixed = tags.clone();
    mixed.sharp_faces.extend([0, 1, 17, 40, 41, 42]);
    out.push(("patch-sharp-faces".to_string(), patch.clone(), mixed.clone()));
    out.push(("ico-all-sharp".to_string(), shapes::icosahedron(), SharpnessTags::all_faces(&shapes::icosahedron())));
    for scheme in [SchemeKind::Sqrt3, SchemeKind::Loop, SchemeKind::Hybrid] {
        let recs = subdivide(patch.clone(), mixed.clone(), scheme, 2, RuleOptions::default()).unwrap();
        let last = recs.into_iter().last().unwrap();
        out.push((format!("patch-{scheme}-2"), last.mesh, last.tags));
    }
    out
}

/// Peak resident set size of this process in bytes, where the platform
/// reports it.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}
