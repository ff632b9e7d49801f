use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;

use nalgebra::DMatrix;

use crate::mesh::Vec3;
use crate::stencil;

use super::AnalysisError;

/// Tolerance for comparing eigenvalues.
pub const EIGEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Whether this is one of a complex conjugate pair.
    pub fn is_complex(&self) -> bool {
        self.im.abs() > EIGEN_TOL
    }
}

impl From<f64> for Eigenvalue {
    fn from(re: f64) -> Self {
        Self::real(re)
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complex() {
            write!(f, "{:.12} {:+.12}i", self.re, self.im)
        } else {
            write!(f, "{:.12}", self.re)
        }
    }
}

/// Real eigenvalues, in the given order.
pub fn real_spectrum(values: &[f64]) -> Vec<Eigenvalue> {
    values.iter().copied().map(Eigenvalue::real).collect()
}

/// Outcome of an eigenvalue ordering check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCheck {
    pub passed: bool,
    /// One line per violated relation, or a single summary line on success.
    pub report: Vec<String>,
}

impl ConditionCheck {
    fn from_failures(ok: String, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Self {
                passed: true,
                report: vec![ok],
            }
        } else {
            Self {
                passed: false,
                report: failures,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Sorted by decreasing modulus; conjugate pairs are adjacent.
    pub eigenvalues: Vec<Eigenvalue>,
    /// `1 = l1 > l2 = l3 > li` for the remaining eigenvalues.
    pub sqrt3_condition: ConditionCheck,
    /// `1 = l0 > l1 >= l2 > l3`.
    pub tangent_plane_condition: ConditionCheck,
    pub subdominant: Option<Eigenvalue>,
}

impl SpectrumReport {
    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e.re).collect()
    }

    pub fn has_complex_pair(&self) -> bool {
        self.eigenvalues.iter().any(Eigenvalue::is_complex)
    }
}

/// All eigenvalues of a small dense matrix, sorted by decreasing modulus.
pub fn spectrum(m: &DMatrix<f64>) -> Result<SpectrumReport, AnalysisError> {
    if !m.is_square() {
        return Err(AnalysisError::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut eigenvalues = if m.nrows() == 0 { Vec::new() } else { schur_eigenvalues(m)? };
    eigenvalues.sort_by(compare);
    Ok(SpectrumReport {
        sqrt3_condition: check_sqrt3_conditions(&eigenvalues),
        tangent_plane_condition: check_tangent_plane_condition(&eigenvalues),
        subdominant: eigenvalues.get(1).copied(),
        eigenvalues,
    })
}

// The Schur iteration can stall on exactly structured matrices. The
// transpose has the same eigenvalues and a looser deflation threshold
// costs far less accuracy than the comparison tolerance.
fn schur_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Eigenvalue>, AnalysisError> {
    let max_iter = 10_000 * m.nrows();
    let attempts = [
        (false, f64::EPSILON),
        (true, f64::EPSILON),
        (false, 1e-15),
        (true, 1e-15),
        (false, 1e-14),
        (false, 1e-13),
        (false, 1e-12),
    ];
    for (transpose, eps) in attempts {
        let a = if transpose { m.transpose() } else { m.clone() };
        if let Some(schur) = nalgebra::Schur::try_new(a, eps, max_iter) {
            return Ok(schur
                .complex_eigenvalues()
                .iter()
                .map(|c| Eigenvalue { re: c.re, im: c.im })
                .collect());
        }
    }
    Err(AnalysisError::EigenSolverFailed)
}

// Decreasing modulus, then decreasing real part, then positive imaginary
// part first.
fn compare(x: &Eigenvalue, y: &Eigenvalue) -> Ordering {
    let (mx, my) = (x.modulus(), y.modulus());
    if (mx - my).abs() > 1e-12 {
        return my.total_cmp(&mx);
    }
    if (x.re - y.re).abs() > 1e-12 {
        return y.re.total_cmp(&x.re);
    }
    y.im.total_cmp(&x.im)
}

/// Closed-form eigenvalues of the two-step sqrt3 matrix at valence `n`:
/// `1`, `(2 - 3 alpha)^2 / 9` and `(2 + 2 cos(2 pi k / n)) / 9` for
/// `k = 1..n`.
pub fn expected_sqrt3_spectrum(n: usize, alpha: f64) -> Result<Vec<f64>, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::InvalidValence(n));
    }
    let mut out = vec![1.0, (2.0 - 3.0 * alpha).powi(2) / 9.0];
    out.extend((1..n).map(|k| (2.0 + 2.0 * (TAU * k as f64 / n as f64).cos()) / 9.0));
    Ok(out)
}

/// `1 = l1 > l2 = l3 > li` for all remaining `i`, on moduli.
pub fn check_sqrt3_conditions(spectrum: &[Eigenvalue]) -> ConditionCheck {
    let mut fails = Vec::new();
    if spectrum.len() < 3 {
        fails.push(format!("need at least 3 eigenvalues, got {}", spectrum.len()));
        return ConditionCheck::from_failures(String::new(), fails);
    }
    let l: Vec<f64> = spectrum.iter().map(Eigenvalue::modulus).collect();
    if (spectrum[0].re - 1.0).abs() > EIGEN_TOL || spectrum[0].is_complex() {
        fails.push(format!("leading eigenvalue {} is not 1", spectrum[0]));
    }
    if l[1] >= 1.0 - EIGEN_TOL {
        fails.push(format!("subdominant {:.12} is not below 1", l[1]));
    }
    if (l[1] - l[2]).abs() > EIGEN_TOL {
        fails.push(format!("subdominant pair differs: {:.12} vs {:.12}", l[1], l[2]));
    }
    if spectrum[1].is_complex() || spectrum[2].is_complex() {
        fails.push("subdominant pair is complex".to_string());
    }
    if let Some(&l3) = l.get(3) {
        if l[2] - l3 <= EIGEN_TOL {
            fails.push(format!("subdominant {:.12} does not dominate {:.12}", l[2], l3));
        }
    }
    ConditionCheck::from_failures(format!("1 > {:.12} = {:.12} > rest", l[1], l[2]), fails)
}

/// `1 = l0 > l1 >= l2 > l3`, on moduli.
pub fn check_tangent_plane_condition(spectrum: &[Eigenvalue]) -> ConditionCheck {
    let mut fails = Vec::new();
    if spectrum.len() < 3 {
        fails.push(format!("need at least 3 eigenvalues, got {}", spectrum.len()));
        return ConditionCheck::from_failures(String::new(), fails);
    }
    let l: Vec<f64> = spectrum.iter().map(Eigenvalue::modulus).collect();
    if (spectrum[0].re - 1.0).abs() > EIGEN_TOL || spectrum[0].is_complex() {
        fails.push(format!("leading eigenvalue {} is not 1", spectrum[0]));
    }
    if l[1] >= 1.0 - EIGEN_TOL {
        fails.push(format!("l1 = {:.12} is not below 1", l[1]));
    }
    if l[1] < l[2] - EIGEN_TOL {
        fails.push(format!("l1 = {:.12} is below l2 = {:.12}", l[1], l[2]));
    }
    if spectrum[1].is_complex() || spectrum[2].is_complex() {
        fails.push("subdominant pair is complex".to_string());
    }
    if let Some(&l3) = l.get(3) {
        if l[2] - l3 <= EIGEN_TOL {
            fails.push(format!("l2 = {:.12} is not above l3 = {l3:.12}", l[2]));
        }
    }
    ConditionCheck::from_failures(format!("1 > {:.12} >= {:.12} > rest", l[1], l[2]), fails)
}

/// Subdominant eigenvalue of Loop's scheme at valence `n`:
/// `(3 + 2 cos(2 pi / n)) / 8`.
pub fn loop_subdominant(n: usize) -> Result<f64, AnalysisError> {
    loop_circulant(n, 1)
}

/// The next frequency, `(3 + 2 cos(4 pi / n)) / 8`.
pub fn loop_subdominant_companion(n: usize) -> Result<f64, AnalysisError> {
    loop_circulant(n, 2)
}

fn loop_circulant(n: usize, k: usize) -> Result<f64, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::InvalidValence(n));
    }
    Ok((3.0 + 2.0 * (TAU * k as f64 / n as f64).cos()) / 8.0)
}

/// Two sqrt3 steps around a vertex of valence `n`, written out directly.
///
/// `v[0]` is the center and `v[1..=n]` its ring in counter-clockwise
/// order. The first step relaxes the center and inserts the centroids
/// `u_i = (v_0 + v_i + v_{i+1}) / 3`, which form the new ring after the
/// flip. The second step does the same again, and the centroids
/// `(u_0 + u_{i-1} + u_i) / 3` land on the original spokes.
pub fn two_step_map(n: usize, alpha: f64, v: &[Vec3]) -> Result<Vec<Vec3>, AnalysisError> {
    if n < 3 {
        return Err(AnalysisError::InvalidValence(n));
    }
    if v.len() != n + 1 {
        return Err(AnalysisError::InvalidInput(format!(
            "expected the center and {n} ring points, got {} points",
            v.len()
        )));
    }
    let relax = |c: Vec3, ring: &[Vec3]| -> Result<Vec3, AnalysisError> {
        Ok(stencil::update_vertex(c, ring, alpha)?)
    };
    let ring = &v[1..];
    let mut u = vec![relax(v[0], ring)?];
    u.extend((0..n).map(|i| (v[0] + ring[i] + ring[(i + 1) % n]) / 3.0));
    let mut w = vec![relax(u[0], &u[1..])?];
    w.extend((0..n).map(|i| (u[0] + u[1 + (i + n - 1) % n] + u[1 + i]) / 3.0));
    Ok(w)
}

/// Eigenvectors for `lambda`: an orthonormal basis of the numerical null
/// space of `m - lambda I`, as columns.
pub fn eigenvectors(m: &DMatrix<f64>, lambda: f64, tol: f64) -> Result<DMatrix<f64>, AnalysisError> {
    let n = m.nrows();
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let svd = shifted
        .try_svd(false, true, f64::EPSILON, 10_000 * n.max(1))
        .ok_or(AnalysisError::EigenSolverFailed)?;
    let v_t = svd.v_t.expect("requested");
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= tol)
        .collect();
    Ok(DMatrix::from_fn(n, cols.len(), |r, c| v_t[(cols[c], r)]))
}

/// Singular values of `m - lambda I`, smallest first.
pub fn shifted_singular_values(m: &DMatrix<f64>, lambda: f64) -> Result<Vec<f64>, AnalysisError> {
    let n = m.nrows();
    let shifted = m - DMatrix::identity(n, n) * lambda;
    let svd = shifted
        .try_svd(false, false, f64::EPSILON, 10_000 * n.max(1))
        .ok_or(AnalysisError::EigenSolverFailed)?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(f64::total_cmp);
    Ok(s)
}
