//! Small reference meshes used by tests, benchmarks and the analysis patches.

use crate::mesh::{TriMesh, Vec3};

pub fn single_triangle() -> TriMesh {
    TriMesh::new(
        vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ],
        vec![[0, 1, 2]],
    )
    .expect("valid triangle")
}

pub fn tetrahedron() -> TriMesh {
    TriMesh::new(
        vec![
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
    .expect("valid tetrahedron")
}

pub fn octahedron() -> TriMesh {
    TriMesh::new(
        vec![
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
        ],
        vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ],
    )
    .expect("valid octahedron")
}

/// Regular icosahedron with outward (counter-clockwise) winding.
pub fn icosahedron() -> TriMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let positions = vec![
        Vec3::new(-1.0, t, 0.0),
        Vec3::new(1.0, t, 0.0),
        Vec3::new(-1.0, -t, 0.0),
        Vec3::new(1.0, -t, 0.0),
        Vec3::new(0.0, -1.0, t),
        Vec3::new(0.0, 1.0, t),
        Vec3::new(0.0, -1.0, -t),
        Vec3::new(0.0, 1.0, -t),
        Vec3::new(t, 0.0, -1.0),
        Vec3::new(t, 0.0, 1.0),
        Vec3::new(-t, 0.0, -1.0),
        Vec3::new(-t, 0.0, 1.0),
    ];
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    TriMesh::new(positions, faces).expect("valid icosahedron")
}

/// Flat `w x h` quad grid in the z = 0 plane, each quad split along its
/// main diagonal. Vertex `(i, j)` has index `j * (w + 1) + i`.
pub fn grid(w: usize, h: usize) -> TriMesh {
    assert!(w >= 1 && h >= 1);
    let mut positions = Vec::with_capacity((w + 1) * (h + 1));
    for j in 0..=h {
        for i in 0..=w {
            positions.push(Vec3::new(i as f64, j as f64, 0.0));
        }
    }
    let id = |i: usize, j: usize| j * (w + 1) + i;
    let mut faces = Vec::with_capacity(2 * w * h);
    for j in 0..h {
        for i in 0..w {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriMesh::new(positions, faces).expect("valid grid")
}

/// Torus with `m` segments around the tube axis and `n` around the tube,
/// triangulated like [`grid`]. Needs `m, n >= 3`.
pub fn torus(m: usize, n: usize, major: f64, minor: f64) -> TriMesh {
    assert!(m >= 3 && n >= 3);
    let mut positions = Vec::with_capacity(m * n);
    for j in 0..n {
        let phi = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        for i in 0..m {
            let theta = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
            let r = major + minor * phi.cos();
            positions.push(Vec3::new(r * theta.cos(), r * theta.sin(), minor * phi.sin()));
        }
    }
    let id = |i: usize, j: usize| (j % n) * m + (i % m);
    let mut faces = Vec::with_capacity(2 * m * n);
    for j in 0..n {
        for i in 0..m {
            faces.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            faces.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    TriMesh::new(positions, faces).expect("valid torus")
}
