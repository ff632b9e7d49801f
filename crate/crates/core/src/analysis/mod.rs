//! Numerical checks of the schemes: local subdivision matrices and their
//! spectra, the characteristic map, valence growth near tagged edges and
//! convergence rates.

mod charmap;
mod convergence;
mod local;
pub mod patch;
mod spectrum;
mod valence;

use thiserror::Error;

use crate::schemes::SchemeError;
use crate::stencil::StencilError;

pub use charmap::{characteristic_map, CharacteristicMapSample, MAX_RESOLUTION};
pub use convergence::{convergence_ratio, displacements};
pub use local::{apply, local_matrix, LocalConfiguration};
pub use spectrum::{
    check_sqrt3_conditions, check_tangent_plane_condition, eigenvectors, expected_sqrt3_spectrum, loop_subdominant,
    loop_subdominant_companion, real_spectrum, shifted_singular_values, spectrum, two_step_map, ConditionCheck,
    Eigenvalue, SpectrumReport, EIGEN_TOL,
};
pub use valence::{valence_trace, TrackedKind, TrackedVertex, ValenceTrace};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid valence {0}, need at least 3")]
    InvalidValence(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error("{padding} padding rings around {rings} control rings do not cover the stencil support")]
    ConfigurationTooSmall { rings: usize, padding: usize },
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("eigenvalue iteration did not converge")]
    EigenSolverFailed,
    #[error("subdominant eigenvalues are not a real equal pair")]
    ComplexSubdominantPair,
    #[error("subdominant eigenspace is not two-dimensional")]
    DegenerateEigenvector,
    #[error("invalid resolution {0}, expected 1 to {MAX_RESOLUTION}")]
    InvalidResolution(usize),
    #[error("need at least 3 levels, got {0}")]
    TooFewLevels(usize),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

impl From<StencilError> for AnalysisError {
    fn from(e: StencilError) -> Self {
        AnalysisError::Scheme(SchemeError::Stencil(e))
    }
}
