//! Spectral toolkit for the operator
//! `ly = -y'' + p(x) y(a) + q(x) y(b)` on `(0, pi)` with `y^(j)(0) = y(pi) = 0`.
//!
//! Forward spectra come from closed-form characteristic functions, the
//! [`nonuniq`] module builds coefficient pairs sharing both spectra,
//! [`traces`] compares eigenvalue sums with coefficient sums, and
//! [`inverse`] rebuilds coefficients supported right of `b` from two spectra.

pub mod charfn;
pub mod cli;
mod error;
pub mod fixtures;
pub mod funcrep;
pub mod inverse;
pub mod nonuniq;
pub mod oracle;
mod precise;
pub mod spectrum;
pub mod traces;
pub mod verify;

pub use charfn::{Bvp, CharEval, Problem};
pub use error::{Error, Result};
pub use funcrep::{FunctionRep, Rho};
pub use num_complex::Complex64;
pub use spectrum::Spectrum;

pub(crate) const PI: f64 = std::f64::consts::PI;
