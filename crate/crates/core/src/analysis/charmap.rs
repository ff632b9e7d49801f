use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::mesh::{face_halfedges, EdgeKey, TriMesh, Vec3};
use crate::schemes::{loop_step, SchemeKind};
use crate::tagging::{RuleOptions, SharpnessTags};

use super::local::{local_matrix, LocalConfiguration};
use super::patch::RegularPatch;
use super::spectrum::{eigenvectors, shifted_singular_values, spectrum, EIGEN_TOL};
use super::AnalysisError;

/// Largest accepted sampling resolution.
pub const MAX_RESOLUTION: usize = 1024;

// Singular values below this count as zero when extracting eigenvectors.
const NULL_TOL: f64 = 1e-8;

/// The characteristic map over the faces around the center, sampled on a
/// regular grid in each face.
#[derive(Debug, Clone)]
pub struct CharacteristicMapSample {
    pub valence: usize,
    /// Requested resolution.
    pub resolution: usize,
    /// Grid segments per face edge: the smallest power of two that is at
    /// least `resolution`.
    pub segments: usize,
    pub subdominant: f64,
    /// `grids[s][i][j]` is the image of `(i d_s + j d_{s+1}) / segments`,
    /// for `i + j <= segments`.
    pub grids: Vec<Vec<Vec<[f64; 2]>>>,
    /// Sign of each sampled triangle's area, face by face.
    pub orientation: Vec<i8>,
    pub min_area: f64,
    /// Largest deviation of an interior angle sum from a full turn.
    pub max_angle_defect: f64,
    pub boundary_simple: bool,
    pub regular: bool,
    pub injective: bool,
}

impl CharacteristicMapSample {
    pub fn verdict(&self) -> String {
        let r = if self.regular { "regular" } else { "not regular" };
        let i = if self.injective { "injective" } else { "not injective" };
        format!("{r}, {i} (numerical, at resolution {})", self.segments)
    }

    /// Iso-parameter lines: constant `i`, constant `j` and constant `i + j`
    /// in every face.
    pub fn iso_lines(&self) -> Vec<Vec<[f64; 2]>> {
        let s = self.segments;
        let mut lines = Vec::new();
        for grid in &self.grids {
            for (c, row) in grid.iter().enumerate().take(s) {
                lines.push(row[..=s - c].to_vec());
                lines.push((0..=s - c).map(|i| grid[i][c]).collect());
            }
            for c in 1..=s {
                lines.push((0..=c).map(|i| grid[i][c - i]).collect());
            }
        }
        lines
    }

    /// `x y` per line, a blank line between iso-lines.
    pub fn to_point_cloud(&self) -> String {
        let mut out = String::new();
        for (k, line) in self.iso_lines().iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            for p in line {
                let _ = writeln!(out, "{} {}", p[0], p[1]);
            }
        }
        out
    }
}

/// Samples the characteristic map of `scheme` at valence `n`.
///
/// The two subdominant eigenvectors of the two-ring subdivision matrix give
/// planar control points. Those are refined until each face around the
/// center carries a grid of `resolution` segments per edge (rounded up to a
/// power of two). The map is reported regular if every sampled triangle
/// has positive area, and injective if in addition the angles around every
/// interior sample add up to a full turn and the outline is a simple
/// polygon. Both are numerical verdicts at the sampled resolution.
pub fn characteristic_map(scheme: SchemeKind, n: usize, resolution: usize) -> Result<CharacteristicMapSample, AnalysisError> {
    if scheme != SchemeKind::Loop {
        return Err(AnalysisError::UnsupportedConfiguration(format!(
            "characteristic maps are sampled for the loop scheme only, not {scheme}"
        )));
    }
    if n < 3 {
        return Err(AnalysisError::InvalidValence(n));
    }
    if resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(AnalysisError::InvalidResolution(resolution));
    }
    let levels = resolution.next_power_of_two().trailing_zeros() as usize;
    let segments = 1usize << levels;

    let config = LocalConfiguration::new(n).with_rings(2);
    let m = local_matrix(scheme, &config, 1)?;
    let report = spectrum(&m)?;
    let ev = &report.eigenvalues;
    if ev.len() < 3 || ev[1].is_complex() || ev[2].is_complex() || (ev[1].re - ev[2].re).abs() > EIGEN_TOL {
        return Err(AnalysisError::ComplexSubdominantPair);
    }
    let lambda = 0.5 * (ev[1].re + ev[2].re);
    let sv = shifted_singular_values(&m, lambda)?;
    if sv[1] > NULL_TOL || sv.get(2).is_some_and(|&s| s <= NULL_TOL) {
        return Err(AnalysisError::DegenerateEigenvector);
    }
    let basis = eigenvectors(&m, lambda, NULL_TOL)?;
    if basis.ncols() != 2 {
        return Err(AnalysisError::DegenerateEigenvector);
    }

    let patch = RegularPatch::new(n, 2);
    let positions: Vec<Vec3> = (0..patch.mesh.vertex_count())
        .map(|j| Vec3::new(basis[(j, 0)], basis[(j, 1)], 0.0))
        .collect();
    let roots: Vec<usize> = (0..patch.mesh.face_count())
        .filter(|&f| patch.mesh.face(f)[0] == 0)
        .collect();
    debug_assert_eq!(roots.len(), n);

    let mut mesh = patch.mesh.with_positions(positions);
    let tags = SharpnessTags::new();
    for _ in 0..levels {
        mesh = loop_step(&mesh, &tags, RuleOptions::default())?.mesh;
    }

    let leaves = leaf_params(segments, levels);
    let per_root = leaves.len();
    let mut grids = Vec::with_capacity(n);
    let mut region = Vec::with_capacity(n * per_root);
    for &root in &roots {
        let mut grid: Vec<Vec<[f64; 2]>> = (0..=segments).map(|i| vec![[0.0; 2]; segments - i + 1]).collect();
        for (k, params) in leaves.iter().enumerate() {
            let f = root * per_root + k;
            region.push(f);
            for (corner, &(i, j)) in mesh.face(f).iter().zip(params) {
                let p = mesh.position(*corner);
                grid[i][j] = [p.x, p.y];
            }
        }
        grids.push(grid);
    }

    let area = |f: usize| {
        let [a, b, c] = mesh.face(f).map(|v| mesh.position(v));
        (b - a).xy().perp(&(c - a).xy()) * 0.5
    };
    let total: f64 = region.iter().map(|&f| area(f)).sum();
    let flip = total < 0.0;
    if flip {
        for grid in &mut grids {
            for row in grid.iter_mut() {
                for p in row.iter_mut() {
                    p[1] = -p[1];
                }
            }
        }
    }
    let sign = if flip { -1.0 } else { 1.0 };
    let areas: Vec<f64> = region.iter().map(|&f| sign * area(f)).collect();
    let orientation: Vec<i8> = areas.iter().map(|&a| if a > 0.0 { 1 } else if a < 0.0 { -1 } else { 0 }).collect();
    let min_area = areas.iter().copied().fold(f64::INFINITY, f64::min);
    let regular = orientation.iter().all(|&s| s > 0);

    let (max_angle_defect, boundary_simple) = injectivity(&mesh, &region, sign);
    let injective = regular && max_angle_defect < 1e-6 && boundary_simple;

    Ok(CharacteristicMapSample {
        valence: n,
        resolution,
        segments,
        subdominant: lambda,
        grids,
        orientation,
        min_area,
        max_angle_defect,
        boundary_simple,
        regular,
        injective,
    })
}

/// Grid coordinates of the corners of every descendant of a face after
/// `levels` 1-to-4 splits, in the order the splits emit them.
fn leaf_params(segments: usize, levels: usize) -> Vec<[(usize, usize); 3]> {
    let mut tris = vec![[(0, 0), (segments, 0), (0, segments)]];
    let mid = |p: (usize, usize), q: (usize, usize)| ((p.0 + q.0) / 2, (p.1 + q.1) / 2);
    for _ in 0..levels {
        let mut next = Vec::with_capacity(4 * tris.len());
        for [a, b, c] in tris {
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    tris
}

/// Largest angle-sum defect over interior samples, and whether the outline
/// of the sampled region is one simple polygon.
fn injectivity(mesh: &TriMesh, region: &[usize], sign: f64) -> (f64, bool) {
    let at = |v: usize| {
        let p = mesh.position(v);
        nalgebra::Vector2::new(p.x, sign * p.y)
    };
    let mut in_region = vec![false; mesh.face_count()];
    let mut edge_uses: HashMap<EdgeKey, usize> = HashMap::new();
    for &f in region {
        in_region[f] = true;
        for (a, b) in face_halfedges(mesh.face(f)) {
            *edge_uses.entry(EdgeKey::new(a, b)).or_default() += 1;
        }
    }
    let mut next: HashMap<usize, usize> = HashMap::new();
    let mut on_outline = vec![false; mesh.vertex_count()];
    let mut simple = true;
    for &f in region {
        for (a, b) in face_halfedges(mesh.face(f)) {
            if edge_uses[&EdgeKey::new(a, b)] == 1 {
                simple &= next.insert(a, b).is_none();
                on_outline[a] = true;
                on_outline[b] = true;
            }
        }
    }

    let mut defect: f64 = 0.0;
    let mut seen = vec![false; mesh.vertex_count()];
    for &f in region {
        for v in mesh.face(f) {
            if seen[v] || on_outline[v] {
                continue;
            }
            seen[v] = true;
            let mut sum = 0.0;
            for &g in mesh.vertex_faces(v) {
                if !in_region[g] {
                    return (f64::INFINITY, false);
                }
                let face = mesh.face(g);
                let k = face.iter().position(|&x| x == v).expect("incident");
                let (p, q) = (at(face[(k + 1) % 3]) - at(v), at(face[(k + 2) % 3]) - at(v));
                sum += p.perp(&q).atan2(p.dot(&q));
            }
            defect = defect.max((sum - TAU).abs());
        }
    }

    // Walk the outline once around and test its segments pairwise.
    let Some(&start) = next.keys().min() else {
        return (defect, false);
    };
    let mut cycle = vec![start];
    let mut v = start;
    while let Some(&w) = next.get(&v) {
        if w == start {
            break;
        }
        if cycle.len() > next.len() {
            return (defect, false);
        }
        cycle.push(w);
        v = w;
    }
    if cycle.len() != next.len() || next.get(&v) != Some(&start) {
        return (defect, false);
    }
    let pts: Vec<_> = cycle.iter().map(|&v| at(v)).collect();
    let k = pts.len();
    for i in 0..k {
        for j in i + 1..k {
            if j == i + 1 || (i == 0 && j == k - 1) {
                continue;
            }
            if segments_meet(pts[i], pts[(i + 1) % k], pts[j], pts[(j + 1) % k]) {
                simple = false;
                return (defect, simple);
            }
        }
    }
    (defect, simple)
}

type P2 = nalgebra::Vector2<f64>;

fn segments_meet(a: P2, b: P2, c: P2, d: P2) -> bool {
    let orient = |p: P2, q: P2, r: P2| (q - p).perp(&(r - p));
    let within = |p: P2, q: P2, r: P2| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    let (d1, d2) = (orient(c, d, a), orient(c, d, b));
    let (d3, d4) = (orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && within(c, d, a))
        || (d2 == 0.0 && within(c, d, b))
        || (d3 == 0.0 && within(a, b, c))
        || (d4 == 0.0 && within(a, b, d))
}
