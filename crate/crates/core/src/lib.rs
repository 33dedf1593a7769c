//! Exact graded differential calculus on the Z₂-graded matrix algebras M(n|m).

pub mod basis;
pub mod bundles;
pub mod calculus;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod forms;
pub mod identities;
pub mod json;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod report;
pub mod scalar;
pub mod suites;
pub mod symplectic;

pub use basis::{HomogeneousBasis, StructureConstants};
pub use error::{Error, Result};
pub use matrix::{BodyMatrix, GradedMatrix, Parity};
pub use scalar::{Rational, Scalar};
