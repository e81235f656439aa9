//! Exact arithmetic substrate: finite fields, Laurent polynomials in `t`,
//! 2x2/3x3 Laurent matrices and Gaussian elimination over F_q.

mod field;
mod laurent;
mod linalg;
mod matrix;

pub use field::{FieldOp, FiniteField, Fq, EXTENSION_BOUND, PRIME_BOUND};
pub use laurent::LaurentPoly;
pub use linalg::{Echelon, FqMatrix};
pub use matrix::MatL;

/// Exact non-negative orbit count.
pub type Count = num_bigint::BigUint;
