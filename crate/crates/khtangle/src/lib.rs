//! Arc algebras, Khovanov complexes of tangles with their Burnside-level
//! refinement, exact integral homology, gluing, and Hochschild homology.

pub mod arc_algebra;
pub mod burnside;
pub mod cli;
pub mod complex;
pub mod corpus;
pub mod curves;
pub mod diagram;
pub mod error;
pub mod frobenius;
pub mod hochschild;
pub mod homology;
pub mod matching;
pub mod snf;
pub mod tensor;

pub use error::{KhError, Result};
