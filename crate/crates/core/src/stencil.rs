//! Affine stencils shared by the three refinement operators.

use std::f64::consts::PI;

use thiserror::Error;

use crate::mesh::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StencilError {
    #[error("valence {0} is below 3")]
    InvalidValence(usize),
    #[error("vertex rule needs at least one neighbor")]
    EmptyNeighborhood,
}

/// Which valence bucket of the vertex rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValenceKind {
    Interior,
    Boundary,
}

/// Crease vertex mask `(prev, self, next)`.
pub const CREASE_EVEN: [f64; 3] = [1.0 / 8.0, 3.0 / 4.0, 1.0 / 8.0];
/// Crease edge mask.
pub const CREASE_ODD: [f64; 2] = [0.5, 0.5];
/// Loop interior edge mask `(a, b, c, d)`: endpoints then wings.
pub const LOOP_ODD: [f64; 4] = [3.0 / 8.0, 3.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0];

/// Kobbelt's relaxation weight `(4 - 2 cos(2 pi / n)) / 9`.
pub fn sqrt3_alpha(n: usize) -> Result<f64, StencilError> {
    if n < 3 {
        return Err(StencilError::InvalidValence(n));
    }
    Ok((4.0 - 2.0 * (2.0 * PI / n as f64).cos()) / 9.0)
}

/// Weight of the vertex rule, bucketed by valence.
///
/// * boundary, `n = 3`: 3/16
/// * `3 < n < 6`: 3/8
/// * `n >= 6`, and interior `n = 3`: [`sqrt3_alpha`]
pub fn alpha(n: usize, kind: ValenceKind) -> Result<f64, StencilError> {
    match (n, kind) {
        (0..=2, _) => Err(StencilError::InvalidValence(n)),
        (3, ValenceKind::Boundary) => Ok(3.0 / 16.0),
        (4 | 5, _) => Ok(3.0 / 8.0),
        _ => sqrt3_alpha(n),
    }
}

/// `(1 - alpha) p + alpha * mean(neighbors)`.
pub fn update_vertex(p: Vec3, neighbors: &[Vec3], alpha: f64) -> Result<Vec3, StencilError> {
    if neighbors.is_empty() {
        return Err(StencilError::EmptyNeighborhood);
    }
    let sum = neighbors.iter().fold(Vec3::zeros(), |acc, q| acc + q);
    Ok(p * (1.0 - alpha) + sum * (alpha / neighbors.len() as f64))
}

pub fn crease_even_update(prev: Vec3, v: Vec3, next: Vec3) -> Vec3 {
    prev * CREASE_EVEN[0] + v * CREASE_EVEN[1] + next * CREASE_EVEN[2]
}

pub fn crease_odd_point(a: Vec3, b: Vec3) -> Vec3 {
    a * CREASE_ODD[0] + b * CREASE_ODD[1]
}

/// Loop edge point for edge `(a, b)` with opposite vertices `c` and `d`.
pub fn loop_interior_edge_point(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> Vec3 {
    (a + b) * LOOP_ODD[0] + (c + d) * LOOP_ODD[2]
}

pub fn face_centroid(corners: [Vec3; 3]) -> Vec3 {
    (corners[0] + corners[1] + corners[2]) / 3.0
}

/// Endpoint weights `(w_major, w_minor)` for an interior odd vertex next to
/// a vertex of valence `n`.
///
/// For `n <= 6` this is the unmodified pair `(1/2, 1/4)`. For `n > 6` it is
/// `(1/4 + cos(t) / 4, 1/2 - cos(t) / 4)` with `t = 2 pi / (n - 1)`.
pub fn modified_odd_weights(n: usize) -> Result<(f64, f64), StencilError> {
    if n < 3 {
        return Err(StencilError::InvalidValence(n));
    }
    if n <= 6 {
        return Ok((0.5, 0.25));
    }
    let c = (2.0 * PI / (n - 1) as f64).cos();
    Ok((0.25 + 0.25 * c, 0.5 - 0.25 * c))
}

/// Edge point with the modified mask: `w_major` on the extraordinary
/// endpoint, `w_minor` on the other one, 1/8 on each wing.
pub fn modified_edge_point(extraordinary: Vec3, other: Vec3, c: Vec3, d: Vec3, n: usize) -> Result<Vec3, StencilError> {
    let (major, minor) = modified_odd_weights(n)?;
    Ok(extraordinary * major + other * minor + (c + d) * 0.125)
}

/// Weights of every mask at one valence, for inspection and the affine
/// invariance checks.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilWeights {
    pub alpha: f64,
    pub crease_even: [f64; 3],
    pub crease_odd: [f64; 2],
    pub loop_odd: [f64; 4],
    /// `(w_major, w_minor, 1/8, 1/8)`.
    pub modified_odd: [f64; 4],
}

impl StencilWeights {
    pub fn for_valence(n: usize, kind: ValenceKind) -> Result<Self, StencilError> {
        let (major, minor) = modified_odd_weights(n)?;
        Ok(Self {
            alpha: alpha(n, kind)?,
            crease_even: CREASE_EVEN,
            crease_odd: CREASE_ODD,
            loop_odd: LOOP_ODD,
            modified_odd: [major, minor, 0.125, 0.125],
        })
    }

    /// Sum of weights of each mask; the vertex rule is `1 - alpha + alpha`.
    pub fn sums(&self) -> [f64; 5] {
        [
            (1.0 - self.alpha) + self.alpha,
            self.crease_even.iter().sum(),
            self.crease_odd.iter().sum(),
            self.loop_odd.iter().sum(),
            self.modified_odd.iter().sum(),
        ]
    }
}
