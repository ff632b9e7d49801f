use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::mesh::Vec3;
use crate::schemes::{subdivide, SchemeKind, SubdivisionRecord};
use crate::tagging::{RuleOptions, SharpnessTags};

use super::patch::{lattice_count, lattice_index, LatticePoint, NominalTracker, RegularPatch};
use super::AnalysisError;

/// Neighborhood of a vertex of valence `n` in an otherwise regular
/// triangulation.
///
/// The control points are the vertices within `rings` rings of the center:
/// the center first, then ring by ring in counter-clockwise order starting
/// on the ray of spoke 0. A crease marker on spoke `i` tags the whole ray
/// from the center through ring vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalConfiguration {
    pub valence: usize,
    pub creases: BTreeSet<usize>,
    pub rings: usize,
    /// Extra rings of regular triangles around the control rings.
    pub padding: usize,
    pub options: RuleOptions,
}

impl LocalConfiguration {
    pub fn new(valence: usize) -> Self {
        Self {
            valence,
            creases: BTreeSet::new(),
            rings: 1,
            padding: 2,
            options: RuleOptions::default(),
        }
    }

    pub fn with_rings(mut self, rings: usize) -> Self {
        self.rings = rings;
        self
    }

    pub fn with_crease(mut self, spoke: usize) -> Self {
        self.creases.insert(spoke);
        self
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.valence < 3 {
            return Err(AnalysisError::InvalidValence(self.valence));
        }
        if self.rings == 0 {
            return Err(AnalysisError::InvalidInput("at least one control ring is required".into()));
        }
        if let Some(&s) = self.creases.iter().find(|&&s| s >= self.valence) {
            return Err(AnalysisError::InvalidInput(format!(
                "crease marker on spoke {s}, but the center has valence {}",
                self.valence
            )));
        }
        Ok(())
    }

    /// Number of control points, i.e. the size of the local matrix.
    pub fn control_count(&self) -> usize {
        lattice_count(self.valence, self.rings)
    }

    /// A planar embedding of the control points, in matrix order.
    pub fn control_positions(&self) -> Result<Vec<Vec3>, AnalysisError> {
        self.validate()?;
        Ok(RegularPatch::new(self.valence, self.rings).mesh.positions().to_vec())
    }

    /// The control patch with its crease tags.
    pub fn patch(&self) -> Result<(RegularPatch, SharpnessTags), AnalysisError> {
        self.validate()?;
        Ok(self.tagged_patch(self.rings))
    }

    fn tagged_patch(&self, rings: usize) -> (RegularPatch, SharpnessTags) {
        let patch = RegularPatch::new(self.valence, rings);
        let mut tags = SharpnessTags::new();
        for &s in &self.creases {
            tags.sharp_edges.extend(patch.ray_edges(s));
        }
        (patch, tags)
    }
}

/// Where the refined counterpart of each control point sits, in units of
/// `1 / scale` of the input spacing.
struct Alignment {
    scale: i64,
    rows: Vec<LatticePoint>,
}

fn alignment(scheme: SchemeKind, config: &LocalConfiguration, steps: usize) -> Result<Alignment, AnalysisError> {
    let n = config.valence;
    let controls = RegularPatch::new(n, config.rings).points;
    let unsupported = |why: &str| Err(AnalysisError::UnsupportedConfiguration(why.to_string()));
    match scheme {
        SchemeKind::Loop => {
            if !(1..=2).contains(&steps) {
                return unsupported("steps must be 1 or 2");
            }
            // Loop halves the spacing each step and keeps the lattice.
            let scale = 1i64 << steps;
            Ok(Alignment { scale, rows: controls })
        }
        SchemeKind::Sqrt3 | SchemeKind::Hybrid => {
            if scheme == SchemeKind::Hybrid && !config.creases.is_empty() {
                return unsupported("crease markers are not supported for the hybrid scheme");
            }
            if scheme == SchemeKind::Sqrt3 && !config.creases.is_empty() {
                return unsupported("the sqrt3 scheme ignores crease markers");
            }
            match steps {
                // Two steps shrink the lattice by 3 and restore its orientation.
                2 => Ok(Alignment {
                    scale: 9,
                    rows: controls
                        .into_iter()
                        .map(|p| LatticePoint { a: 3 * p.a, b: 3 * p.b, ..p })
                        .collect(),
                }),
                // One step rotates the lattice; only the first ring has a
                // natural counterpart, the centroids next to the center.
                1 if config.rings == 1 => {
                    let mut rows = vec![LatticePoint::CENTER];
                    rows.extend((0..n).map(|s| LatticePoint { sector: s, a: 1, b: 1 }));
                    Ok(Alignment { scale: 3, rows })
                }
                1 => unsupported("one sqrt3 step is only aligned for a single ring"),
                _ => unsupported("steps must be 1 or 2"),
            }
        }
    }
}

/// Subdivision matrix of `scheme` for `config` over `steps` steps.
///
/// Built by the indicator method: the scheme runs on an embedded patch with
/// one control point set to 1 and the others to 0, and the coefficients are
/// read off at the vertices aligned with the control points. The patch has
/// `config.padding` extra rings; if one more ring changes any coefficient
/// the padding is too small.
pub fn local_matrix(scheme: SchemeKind, config: &LocalConfiguration, steps: usize) -> Result<DMatrix<f64>, AnalysisError> {
    config.validate()?;
    let align = alignment(scheme, config, steps)?;
    let m = indicator_matrix(scheme, config, steps, config.padding, &align)?;
    let wider = indicator_matrix(scheme, config, steps, config.padding + 1, &align)?;
    let diff = (&m - &wider).amax();
    if diff > 1e-12 {
        return Err(AnalysisError::ConfigurationTooSmall {
            rings: config.rings,
            padding: config.padding,
        });
    }
    Ok(m)
}

fn indicator_matrix(
    scheme: SchemeKind,
    config: &LocalConfiguration,
    steps: usize,
    padding: usize,
    align: &Alignment,
) -> Result<DMatrix<f64>, AnalysisError> {
    let n = config.valence;
    let (patch, tags) = config.tagged_patch(config.rings + padding);
    let size = config.control_count();
    let too_small = || AnalysisError::ConfigurationTooSmall {
        rings: config.rings,
        padding,
    };

    let mut rows: Option<Vec<usize>> = None;
    let mut m = DMatrix::zeros(size, size);
    // Three indicator columns per run, one per coordinate.
    for first in (0..size).step_by(3) {
        let mut positions = vec![Vec3::zeros(); patch.mesh.vertex_count()];
        for k in 0..3.min(size - first) {
            positions[first + k][k] = 1.0;
        }
        let records = subdivide(patch.mesh.with_positions(positions), tags.clone(), scheme, steps, config.options)?;
        let rows = match &rows {
            Some(r) => r,
            None => rows.insert(output_rows(&patch, &records, align).ok_or_else(too_small)?),
        };
        let out = records.last().expect("non-empty").mesh.positions();
        for (i, &v) in rows.iter().enumerate() {
            for k in 0..3.min(size - first) {
                m[(i, first + k)] = out[v][k];
            }
        }
    }
    debug_assert_eq!(lattice_index(n, LatticePoint::CENTER), 0);
    Ok(m)
}

fn output_rows(patch: &RegularPatch, records: &[SubdivisionRecord], align: &Alignment) -> Option<Vec<usize>> {
    let mut tracker = NominalTracker::new(patch, align.scale);
    for w in records.windows(2) {
        tracker.advance(&w[0].mesh, &w[1].provenance);
    }
    let lookup = tracker.lookup();
    align
        .rows
        .iter()
        .map(|p| lookup.get(&tracker.canonical(p.sector, p.a, p.b)).copied())
        .collect()
}

/// Applies `m` to a list of points.
pub fn apply(m: &DMatrix<f64>, points: &[Vec3]) -> Vec<Vec3> {
    assert_eq!(m.ncols(), points.len());
    (0..m.nrows())
        .map(|i| points.iter().enumerate().map(|(j, p)| p * m[(i, j)]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stencil;

    #[test]
    fn sqrt3_two_step_matrix_is_affine() {
        let m = local_matrix(SchemeKind::Sqrt3, &LocalConfiguration::new(6), 2).unwrap();
        assert_eq!(m.shape(), (7, 7));
        for i in 0..7 {
            assert!((m.row(i).sum() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn loop_center_row_is_the_vertex_rule() {
        let m = local_matrix(SchemeKind::Loop, &LocalConfiguration::new(6), 1).unwrap();
        let a = stencil::alpha(6, stencil::ValenceKind::Interior).unwrap();
        assert!((m[(0, 0)] - (1.0 - a)).abs() < 1e-15);
        for j in 1..7 {
            assert!((m[(0, j)] - a / 6.0).abs() < 1e-15);
        }
        // Spoke edge point: 3/8 center and own ring vertex, 1/8 the wings.
        let row: Vec<f64> = m.row(1).iter().copied().collect();
        let want = [0.375, 0.375, 0.125, 0.0, 0.0, 0.0, 0.125];
        for (x, y) in row.iter().zip(want) {
            assert!((x - y).abs() < 1e-15, "{row:?}");
        }
    }

    #[test]
    fn constant_configuration_stays_constant() {
        for scheme in [SchemeKind::Sqrt3, SchemeKind::Loop, SchemeKind::Hybrid] {
            let config = LocalConfiguration::new(5);
            let m = local_matrix(scheme, &config, if scheme == SchemeKind::Loop { 1 } else { 2 }).unwrap();
            let p = Vec3::new(2.0, -1.0, 0.5);
            for q in apply(&m, &vec![p; config.control_count()]) {
                assert!((q - p).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn padding() {
        // Loop contracts towards the center, so the control rings suffice.
        let mut config = LocalConfiguration::new(5).with_rings(2);
        let padded = local_matrix(SchemeKind::Loop, &config, 1).unwrap();
        assert_eq!(padded.shape(), (16, 16));
        config.padding = 0;
        let bare = local_matrix(SchemeKind::Loop, &config, 1).unwrap();
        assert!((padded - bare).amax() < 1e-12);

        // Rows that fall outside the patch cannot be read off.
        let far = Alignment {
            scale: 2,
            rows: vec![LatticePoint { sector: 0, a: 8, b: 0 }],
        };
        assert!(matches!(
            indicator_matrix(SchemeKind::Loop, &config, 1, 0, &far),
            Err(AnalysisError::ConfigurationTooSmall { .. })
        ));
    }

    #[test]
    fn one_sqrt3_step() {
        let m = local_matrix(SchemeKind::Sqrt3, &LocalConfiguration::new(4), 1).unwrap();
        // Ring rows are centroids of the center and two ring neighbors.
        for j in [0, 2, 3] {
            assert!((m[(2, j)] - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(matches!(
            local_matrix(SchemeKind::Sqrt3, &LocalConfiguration::new(4).with_rings(2), 1),
            Err(AnalysisError::UnsupportedConfiguration(_))
        ));
    }

    #[test]
    fn crease_markers() {
        let config = LocalConfiguration::new(6).with_crease(0).with_crease(3);
        let m = local_matrix(SchemeKind::Loop, &config, 1).unwrap();
        // The center follows the crease: 1/8, 3/4, 1/8 along spokes 3 and 0.
        assert!((m[(0, 0)] - 0.75).abs() < 1e-15);
        assert!((m[(0, 1)] - 0.125).abs() < 1e-15);
        assert!((m[(0, 4)] - 0.125).abs() < 1e-15);
        assert!(matches!(
            local_matrix(SchemeKind::Hybrid, &config, 2),
            Err(AnalysisError::UnsupportedConfiguration(_))
        ));
        assert!(LocalConfiguration::new(6).with_crease(6).validate().is_err());
        assert!(matches!(
            LocalConfiguration::new(2).validate(),
            Err(AnalysisError::InvalidValence(2))
        ));
    }
}
