//! Construction and verification of orthogonal polynomial sequences driven
//! by linearly recurrent eigenvalue, node and step sequences.
//!
//! The pipeline: pick a class (generic q, q = 1 or q = -1) and a small
//! parameter set, build the coefficient matrix `C` and its inverse, form
//! the multiplication operator `L` two independent ways, read the
//! three-term recurrence off `L`, and cross-check everything (closed-form
//! recurrence coefficients, generalized and standard moments, discrete
//! weights, Hankel determinants) against the matrix oracles, exactly in
//! the rational backend or within a scaled tolerance in the float backend.

pub mod closed_forms;
pub mod difference;
pub mod error;
pub mod moments;
pub mod newton;
pub mod numerics;
pub mod paramfile;
pub mod poly;
pub mod presets;
pub mod sequences;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{Scalar, ToleranceContext, DEFAULT_EPSILON};

/// Exact rational backend.
pub type Exact = num_rational::BigRational;
/// Complex double-precision backend.
pub type Float = num_complex::Complex64;
