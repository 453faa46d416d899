//! Decompositions of the 3-sphere and lens spaces into three handlebodies.
//!
//! Modules follow the data flow: [`surfaces`] and [`lens`] are the
//! arithmetic layers, [`decomp`] holds the decomposition model and the
//! profile enumerator, [`moves`] the stabilization calculus and
//! [`classify`] the isotopy-class counts.

pub mod classify;
pub mod decomp;
pub mod fixtures;
pub mod lens;
pub mod moves;
pub mod surfaces;

pub use decomp::{CaseId, Decomposition};
pub use lens::ManifoldForm;
pub use surfaces::SurfacePiece;
