//! Special functions on the symmetric cones of real symmetric and complex
//! Hermitian positive definite matrices.
//!
//! * [`partition`], [`jack`], [`symfun`]: partitions, Jack polynomials in the
//!   C-normalization and exact symmetric-polynomial algebra.
//! * [`cone`]: structure constants, cone gamma/beta functions, generalized
//!   Pochhammer symbols and Wallach predicates.
//! * [`jordan`]: Hermitian matrices as cone elements (spectra, determinant,
//!   quadratic representation, square roots).
//! * [`bessel`]: the Bessel function `J_μ` of matrix argument and its
//!   integral representations.
//! * [`beta`]: beta measures, their samplers, the exact moment functional of
//!   the analytically extended beta distributions and the positivity detector.
//! * [`sonine`]: numerical verification of Sonine-type identities.
//! * [`cli`]: the command-line front end behind the `sonine` binary.

pub mod error;
pub mod partition;
pub mod rational;
pub mod jack;
pub mod symfun;
pub mod special;
pub mod linalg;
pub mod cone;
pub mod jordan;
pub mod mc;
pub mod quadrature;
pub mod bessel;
pub mod beta;
pub mod sonine;
pub mod cli;

pub use error::{Error, Result};
