//! Polyharmonic functions of infinite order on annular regions.
//!
//! The crate is organised bottom-up:
//!
//! - [`operator_core`]: fundamental functions of constant-coefficient
//!   differential operators, generalized derivatives and Taylor series in the
//!   fundamental-function basis.
//! - [`spherical`]: real spherical harmonics for `d = 2, 3`, quadrature on the
//!   sphere, Fourier-Laplace coefficients and Lie norms.
//! - [`annular_models`]: reference functions on annuli with closed-form
//!   iterated Laplacians.
//! - [`extension_engine`]: log-variable coefficient jets, extension
//!   coefficients and evaluation of the complex extension.
//! - [`verify_suite`]: numeric witnesses for the Rolle-type lemmas and the
//!   derivative interpolation bounds.

pub mod annular_models;
pub mod error;
pub mod extension_engine;
pub mod operator_core;
pub mod quadrature;
pub mod spherical;
pub mod verify_suite;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

pub(crate) fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, i| acc * i as f64)
}
