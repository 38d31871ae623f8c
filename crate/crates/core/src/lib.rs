//! Ricci curvature between faces of simplicial complexes, combinatorial
//! Laplacian spectra, and checkers for the eigenvalue estimates relating them.

pub mod complex;
pub mod curvature;
pub mod dense;
pub mod document;
pub mod dual_graph;
pub mod error;
pub mod generate;
pub mod report;
pub mod spectral;
pub mod transport;

pub use complex::{orient, Face, SimplicialComplex, WeightAssignment, WeightScheme};
pub use error::{Error, Result};
