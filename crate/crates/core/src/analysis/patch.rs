//! Patches around a single vertex of valence `n` with every other vertex
//! regular, and lattice coordinates to find the same neighborhood again
//! after refinement.
//!
//! The patch is made of `n` sectors. In sector `s`, the point `(a, b)`
//! with `a, b >= 0` sits at `a * d_s + b * d_{s+1}`, where `d_s` are unit
//! directions spaced `2 pi / n` apart. A point on the ray between two
//! sectors is stored in the sector where `b == 0`.

use std::collections::HashMap;

use crate::mesh::{EdgeKey, TriMesh, Vec3};
use crate::schemes::Provenance;

/// Canonical lattice point: `sector` is meaningless for the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub sector: usize,
    pub a: i64,
    pub b: i64,
}

impl LatticePoint {
    pub const CENTER: Self = Self {
        sector: 0,
        a: 0,
        b: 0,
    };

    pub fn is_center(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Hexagonal ring index.
    pub fn ring(&self) -> i64 {
        self.a + self.b
    }
}

/// Sector-chart arithmetic for valence `n`.
#[derive(Debug, Clone, Copy)]
pub struct Charts {
    pub n: usize,
}

impl Charts {
    /// Moves `(a, b)` in the chart of `sector` to the chart of `sector - 1`.
    fn down(&self, sector: usize, a: i64, b: i64) -> (usize, i64, i64) {
        ((sector + self.n - 1) % self.n, -b, a + b)
    }

    /// Moves `(a, b)` in the chart of `sector` to the chart of `sector + 1`.
    fn up(&self, sector: usize, a: i64, b: i64) -> (usize, i64, i64) {
        ((sector + 1) % self.n, a + b, -a)
    }

    /// Canonical representative of `(a, b)` given in the chart of `sector`.
    pub fn canonical(&self, sector: usize, a: i64, b: i64) -> LatticePoint {
        let (mut s, mut a, mut b) = (sector % self.n, a, b);
        if a == 0 && b == 0 {
            return LatticePoint::CENTER;
        }
        // Points never wander more than a sector or two from their chart.
        for _ in 0..2 * self.n {
            if a >= 0 && b >= 0 {
                break;
            }
            (s, a, b) = if b < 0 { self.down(s, a, b) } else { self.up(s, a, b) };
        }
        debug_assert!(a >= 0 && b >= 0);
        if a == 0 {
            LatticePoint {
                sector: (s + 1) % self.n,
                a: b,
                b: 0,
            }
        } else {
            LatticePoint { sector: s, a, b }
        }
    }

    /// Expresses `p` in the chart of `sector`, if the sectors are adjacent.
    fn in_chart(&self, p: LatticePoint, sector: usize) -> Option<(i64, i64)> {
        if p.is_center() || p.sector == sector {
            return Some((p.a, p.b));
        }
        if (p.sector + 1) % self.n == sector {
            let (_, a, b) = self.up(p.sector, p.a, p.b);
            return Some((a, b));
        }
        if (sector + 1) % self.n == p.sector {
            let (_, a, b) = self.down(p.sector, p.a, p.b);
            return Some((a, b));
        }
        None
    }

    /// Average of nearby points; `None` if they do not share a chart or the
    /// mean is not a lattice point.
    pub fn mean(&self, points: &[LatticePoint]) -> Option<LatticePoint> {
        let chart = points
            .iter()
            .find(|p| !p.is_center())
            .map_or(0, |p| p.sector);
        let (mut sa, mut sb) = (0i64, 0i64);
        for p in points {
            let (a, b) = self.in_chart(*p, chart)?;
            sa += a;
            sb += b;
        }
        let k = points.len() as i64;
        if sa % k != 0 || sb % k != 0 {
            return None;
        }
        Some(self.canonical(chart, sa / k, sb / k))
    }
}

/// Planar patch of `rings` hexagonal rings around a vertex of valence `n`.
#[derive(Debug, Clone)]
pub struct RegularPatch {
    pub n: usize,
    pub rings: usize,
    pub mesh: TriMesh,
    pub points: Vec<LatticePoint>,
}

/// Vertex index of a canonical lattice point: center first, then ring by
/// ring, each ring sector by sector.
pub fn lattice_index(n: usize, p: LatticePoint) -> usize {
    if p.is_center() {
        return 0;
    }
    let r = p.ring() as usize;
    1 + n * (r - 1) * r / 2 + p.sector * r + p.b as usize
}

/// Number of vertices within `rings` rings of the center.
pub fn lattice_count(n: usize, rings: usize) -> usize {
    1 + n * rings * (rings + 1) / 2
}

impl RegularPatch {
    pub fn new(n: usize, rings: usize) -> Self {
        assert!(n >= 3 && rings >= 1);
        let charts = Charts { n };
        let count = lattice_count(n, rings);
        let mut points = vec![LatticePoint::CENTER; count];
        let mut positions = vec![Vec3::zeros(); count];
        let dir = |s: usize| {
            let t = std::f64::consts::TAU * s as f64 / n as f64;
            Vec3::new(t.cos(), t.sin(), 0.0)
        };
        for s in 0..n {
            for r in 1..=rings as i64 {
                for b in 0..r {
                    let p = LatticePoint { sector: s, a: r - b, b };
                    let i = lattice_index(n, p);
                    points[i] = p;
                    positions[i] = dir(s) * p.a as f64 + dir(s + 1) * p.b as f64;
                }
            }
        }
        let id = |s: usize, a: i64, b: i64| lattice_index(n, charts.canonical(s, a, b));
        let r = rings as i64;
        let mut faces = Vec::new();
        for s in 0..n {
            for a in 0..r {
                for b in 0..r - a {
                    faces.push([id(s, a, b), id(s, a + 1, b), id(s, a, b + 1)]);
                    if a + b < r - 1 {
                        faces.push([id(s, a + 1, b), id(s, a + 1, b + 1), id(s, a, b + 1)]);
                    }
                }
            }
        }
        let mesh = TriMesh::new(positions, faces).expect("valid regular patch");
        Self {
            n,
            rings,
            mesh,
            points,
        }
    }

    /// Edges along the ray of direction `d_sector`, center outwards.
    pub fn ray_edges(&self, sector: usize) -> Vec<EdgeKey> {
        (0..self.rings as i64)
            .map(|a| {
                let p = |a: i64| lattice_index(self.n, Charts { n: self.n }.canonical(sector, a, 0));
                EdgeKey::new(p(a), p(a + 1))
            })
            .collect()
    }
}

/// Lattice coordinates of every vertex through a sequence of refinements,
/// all in units of `1 / scale` of the original spacing.
#[derive(Debug, Clone)]
pub struct NominalTracker {
    charts: Charts,
    pub scale: i64,
    /// `None` for vertices that are off the tracking lattice.
    pub points: Vec<Option<LatticePoint>>,
}

impl NominalTracker {
    pub fn new(patch: &RegularPatch, scale: i64) -> Self {
        let charts = Charts { n: patch.n };
        let points = patch
            .points
            .iter()
            .map(|p| Some(charts.canonical(p.sector, p.a * scale, p.b * scale)))
            .collect();
        Self { charts, scale, points }
    }

    /// Advances through one refinement step.
    pub fn advance(&mut self, parent: &TriMesh, provenance: &[Provenance]) {
        let mean = |vs: &[usize]| -> Option<LatticePoint> {
            let pts: Option<Vec<LatticePoint>> = vs.iter().map(|&v| self.points[v]).collect();
            self.charts.mean(&pts?)
        };
        self.points = provenance
            .iter()
            .map(|p| match *p {
                Provenance::Input { vertex } | Provenance::OldVertexImage { vertex, .. } => self.points[vertex],
                Provenance::FaceCentroid { face } => mean(&parent.face(face)),
                Provenance::EdgePoint { edge, .. } => mean(&[edge.a(), edge.b()]),
            })
            .collect();
    }

    pub fn lookup(&self) -> HashMap<LatticePoint, usize> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (p, i)))
            .collect()
    }

    pub fn canonical(&self, sector: usize, a: i64, b: i64) -> LatticePoint {
        self.charts.canonical(sector, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_valences() {
        for n in 3..=10 {
            let p = RegularPatch::new(n, 3);
            assert_eq!(p.mesh.valence(0), n);
            assert!(!p.mesh.is_boundary_vertex(0));
            assert_eq!(p.mesh.vertex_count(), lattice_count(n, 3));
            assert_eq!(p.mesh.face_count(), 9 * n);
            for v in 1..lattice_count(n, 2) {
                assert!(!p.mesh.is_boundary_vertex(v));
                assert_eq!(p.mesh.valence(v), 6, "n={n} v={v}");
            }
            assert_eq!(p.mesh.euler_characteristic(), 1);
        }
    }

    #[test]
    fn ring_order_is_counter_clockwise() {
        let p = RegularPatch::new(5, 2);
        let ring = p.mesh.one_ring(0);
        let start = ring.iter().position(|&v| v == 1).unwrap();
        let rotated: Vec<usize> = (0..5).map(|k| ring[(start + k) % 5]).collect();
        assert_eq!(rotated, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn chart_round_trip() {
        let c = Charts { n: 5 };
        for s in 0..5 {
            for a in 0..4 {
                for b in 0..4 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let (s1, a1, b1) = c.up(s, a, b);
                    assert_eq!(c.down(s1, a1, b1), (s, a, b));
                    assert_eq!(c.canonical(s1, a1, b1), c.canonical(s, a, b));
                }
            }
        }
        // Ray points belong to the sector where b == 0.
        assert_eq!(c.canonical(2, 0, 3), LatticePoint { sector: 3, a: 3, b: 0 });
        assert_eq!(c.canonical(4, 0, 1), LatticePoint { sector: 0, a: 1, b: 0 });
    }

    #[test]
    fn mean_across_a_ray() {
        let c = Charts { n: 6 };
        // Centroid of (center, u_0, u_1) with u_s = (1, 1) / 3 in sector s,
        // at scale 9: lands on the ray of d_1 at distance 1/3.
        let u0 = c.canonical(0, 3, 3);
        let u1 = c.canonical(1, 3, 3);
        let m = c.mean(&[LatticePoint::CENTER, u0, u1]).unwrap();
        assert_eq!(m, LatticePoint { sector: 1, a: 3, b: 0 });
    }
}
