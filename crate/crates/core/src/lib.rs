//! Squeezed spin coherent states obtained by quantum reduction of Gaussian
//! coherent states in the Bargmann space of `C^N`.
//!
//! The crate is organized bottom-up:
//!
//! * [`numerics`]: small complex linear algebra, log-space combinatorics,
//!   quadrature and RK4.
//! * [`bargmann`]: Gaussian states `psi_{A,w}` on `C^N`.
//! * [`reduction`]: the reduction operator applied to those states, their
//!   symbols and inner-product estimates.
//! * [`spin`]: the `N = 2` case as coefficient vectors in the orthonormal
//!   basis `|n>` of degree-`k` polynomials.
//! * [`propagation`]: classical lifts, spin Hamiltonians, exact quantum
//!   propagation and the symbol ODEs.
//! * [`validation`]: the numerical checks run by the CLI `validate`
//!   subcommand and the acceptance tests.

// `!(x < y)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bargmann;
pub mod error;
pub mod io;
pub mod numerics;
pub mod propagation;
pub mod random;
pub mod reduction;
pub mod spin;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
