use crate::schemes::SubdivisionRecord;

use super::AnalysisError;

/// Largest movement of a surviving vertex between consecutive levels.
pub fn displacements(records: &[SubdivisionRecord]) -> Vec<f64> {
    records
        .windows(2)
        .map(|w| {
            let (old, new) = (&w[0].mesh, &w[1].mesh);
            (0..old.vertex_count())
                .map(|v| (new.position(v) - old.position(v)).norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Geometric mean of the ratios of consecutive [`displacements`].
///
/// A sequence that stops moving has ratio 0.
pub fn convergence_ratio(records: &[SubdivisionRecord]) -> Result<f64, AnalysisError> {
    if records.len() < 3 {
        return Err(AnalysisError::TooFewLevels(records.len()));
    }
    let d = displacements(records);
    let mut log_sum = 0.0;
    for w in d.windows(2) {
        if w[0] == 0.0 || w[1] == 0.0 {
            return Ok(0.0);
        }
        log_sum += (w[1] / w[0]).ln();
    }
    Ok((log_sum / (d.len() - 1) as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Vec3;
    use crate::schemes::{subdivide, SchemeKind};
    use crate::shapes;
    use crate::tagging::{RuleOptions, SharpnessTags};

    fn records(scheme: SchemeKind, levels: usize) -> Vec<SubdivisionRecord> {
        subdivide(shapes::icosahedron(), SharpnessTags::new(), scheme, levels, RuleOptions::default()).unwrap()
    }

    #[test]
    fn constant_mesh_has_ratio_zero() {
        let m = shapes::icosahedron().with_positions(vec![Vec3::new(1.0, 1.0, 1.0); 12]);
        let recs = subdivide(m, SharpnessTags::new(), SchemeKind::Loop, 3, RuleOptions::default()).unwrap();
        assert_eq!(convergence_ratio(&recs).unwrap(), 0.0);
    }

    #[test]
    fn too_few_levels() {
        assert!(matches!(
            convergence_ratio(&records(SchemeKind::Loop, 1)),
            Err(AnalysisError::TooFewLevels(2))
        ));
    }

    #[test]
    fn ratios_on_the_icosahedron() {
        // Old vertices settle at the rate of the quadratic modes, 1/4 per
        // Loop step, not at the subdominant rate.
        let r = convergence_ratio(&records(SchemeKind::Loop, 5)).unwrap();
        assert!(r > 0.2 && r < 0.35, "loop ratio {r}");
        let recs = records(SchemeKind::Sqrt3, 6);
        let r = convergence_ratio(&recs[2..]).unwrap();
        assert!(r < 0.9, "sqrt3 ratio {r}");
        let d = displacements(&recs[2..]);
        assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    }
}
