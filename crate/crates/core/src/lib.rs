//! Triangle-mesh subdivision that keeps tagged sharp features.
//!
//! Smooth regions are refined with Sqrt(3) (centroid insertion and edge
//! flips), tagged sharp faces with the Loop 1-to-4 split, and tagged edges
//! and boundaries with cubic B-spline curve rules that never flip. Pure
//! Sqrt(3) and Loop operators are available as baselines.
//!
//! The [`analysis`] module builds local subdivision matrices by running the
//! operators on embedded patches and checks their spectra, the two-step
//! Sqrt(3) map, the valence growth along creases and the characteristic map.

pub mod analysis;
pub mod io;
pub mod mesh;
pub mod schemes;
pub mod shapes;
pub mod stencil;
pub mod tagging;

pub use mesh::{build_mesh, EdgeKey, MeshError, TriMesh, Vec3};
pub use schemes::{subdivide, Provenance, SchemeError, SchemeKind, SubdivisionRecord};
pub use tagging::{RuleOptions, SharpnessTags};
