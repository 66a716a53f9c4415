//! Toeplitz matrices generated by weights with two conjugate zeros on the unit
//! circle: exact inverses, predictor and orthogonal polynomials, the Hankel
//! series representation of the inverse, and the closed-form asymptotics of
//! inverse entries.

pub mod error;
pub mod par;
pub mod symbol;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub mod coefficients;
pub mod envelope;
pub mod quad;
pub mod toeplitz;
pub mod inversion;
pub mod asymptotics;
pub mod harness;
